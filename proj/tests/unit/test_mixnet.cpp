#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "colo/core/error.hpp"
#include "colo/mixnet/channel.hpp"
#include "colo/mixnet/mixnet.hpp"

namespace colo {
namespace {

const Bytes kQid = {0x51, 0x49, 0x44};

double chi_square(const std::vector<std::uint64_t>& counts, double expected) {
  double x = 0.0;
  for (std::uint64_t c : counts) x += (c - expected) * (c - expected) / expected;
  return x;
}

TEST(DeadDrop, BothEndpointsDeriveTheSameDrop) {
  Prg prg(seed_from_u64(1));
  for (int i = 0; i < 100; ++i) {
    X25519KeyPair a = x25519_keypair(prg);
    X25519KeyPair b = x25519_keypair(prg);
    Seed ka = edge_key(a, b.pk);
    Seed kb = edge_key(b, a.pk);
    ASSERT_EQ(ka, kb);
    for (std::uint64_t r = 0; r < 5; ++r) {
      EXPECT_EQ(derive_drop(ka, kQid, r, 40), derive_drop(kb, kQid, r, 40));
    }
  }
}

TEST(DeadDrop, RoundsLookIndependent) {
  const Seed k = seed_from_u64(7);
  std::vector<std::uint64_t> servers(40), first_byte(256);
  std::set<std::array<std::uint8_t, 16>> ids;
  for (std::uint64_t r = 0; r < 10000; ++r) {
    DeadDrop d = derive_drop(k, kQid, r, 40);
    ++servers[d.server];
    ++first_byte[d.id[0]];
    ids.insert(d.id);
  }
  EXPECT_LT(chi_square(servers, 10000.0 / 40), 72.05);
  EXPECT_LT(chi_square(first_byte, 10000.0 / 256), 330.5);
  EXPECT_EQ(ids.size(), 10000u);
}

TEST(DeadDrop, DistinctEdgesCollideAtTheBirthdayRate) {
  const std::uint32_t M = 40;
  const int edges = 1000;
  std::vector<std::uint64_t> per_server(M);
  std::set<std::array<std::uint8_t, 16>> ids;
  for (int e = 0; e < edges; ++e) {
    DeadDrop d = derive_drop(seed_from_u64(1000 + e), kQid, 3, M);
    ++per_server[d.server];
    ids.insert(d.id);
  }
  EXPECT_EQ(ids.size(), static_cast<std::size_t>(edges));
  double pairs = 0.0;
  for (std::uint64_t c : per_server) pairs += c * (c - 1) / 2.0;
  const double expected = edges * (edges - 1) / 2.0 / M;
  EXPECT_NEAR(pairs / expected, 1.0, 0.2);
}

TEST(DeadDrop, QueryIdSeparatesDrops) {
  const Seed k = seed_from_u64(3);
  EXPECT_NE(derive_drop(k, kQid, 0, 40).id, derive_drop(k, Bytes{1}, 0, 40).id);
}

struct Servers {
  std::vector<X25519KeyPair> keys;
  std::vector<RouteHop> hops;
  explicit Servers(std::uint32_t n) {
    Prg prg(seed_from_u64(99));
    for (std::uint32_t s = 0; s < n; ++s) {
      keys.push_back(x25519_keypair(prg));
      hops.push_back({s, keys.back().pk});
    }
  }
};

TEST(Onion, PeelTwiceThenDropDecrypt) {
  Servers sv(3);
  Prg prg(seed_from_u64(5));
  DeadDrop drop{{1, 2, 3}, 2};
  Bytes payload = {10, 20, 30, 40};
  std::vector<RouteHop> route = {sv.hops[0], sv.hops[1]};
  BuiltOnion onion = build_onion(payload, route, sv.hops[2], drop, 256, prg);
  EXPECT_EQ(onion.data.size(), onion_size(256, 2));
  EXPECT_EQ(onion.reply_keys.size(), 3u);

  auto l0 = peel_layer(onion.data, sv.keys[0]);
  ASSERT_TRUE(l0);
  EXPECT_EQ(l0->kind, PeeledLayer::Kind::kForward);
  EXPECT_EQ(l0->next, 1u);
  EXPECT_EQ(l0->inner.size(), onion_size(256, 1));
  auto l1 = peel_layer(l0->inner, sv.keys[1]);
  ASSERT_TRUE(l1);
  EXPECT_EQ(l1->next, 2u);
  auto l2 = peel_layer(l1->inner, sv.keys[2]);
  ASSERT_TRUE(l2);
  EXPECT_EQ(l2->kind, PeeledLayer::Kind::kDrop);
  EXPECT_EQ(l2->drop_id, drop.id);
  ASSERT_EQ(l2->inner.size(), 256u);
  EXPECT_TRUE(std::equal(payload.begin(), payload.end(), l2->inner.begin()));
  EXPECT_TRUE(std::all_of(l2->inner.begin() + 4, l2->inner.end(), [](auto b) { return b == 0; }));

  Bytes reply = seal_reply(l2->inner, l2->reply_key);
  reply = seal_reply(reply, l1->reply_key);
  reply = seal_reply(reply, l0->reply_key);
  EXPECT_EQ(reply.size(), reply_size(256, 3));
  auto opened = open_reply(reply, onion.reply_keys);
  ASSERT_TRUE(opened);
  EXPECT_EQ(*opened, l2->inner);
}

TEST(Onion, WrongServerCannotPeel) {
  Servers sv(2);
  Prg prg(seed_from_u64(6));
  BuiltOnion onion = build_onion(Bytes{1}, std::vector<RouteHop>{sv.hops[0]}, sv.hops[1],
                                 DeadDrop{}, 64, prg);
  EXPECT_FALSE(peel_layer(onion.data, sv.keys[1]));
}

TEST(Onion, EqualLengthRegardlessOfPayload) {
  Servers sv(4);
  Prg prg(seed_from_u64(7));
  std::vector<RouteHop> route = {sv.hops[3], sv.hops[1], sv.hops[1]};
  std::set<std::size_t> sizes;
  for (std::size_t len : {0, 1, 100, 512}) {
    sizes.insert(build_onion(Bytes(len, 7), route, sv.hops[0], DeadDrop{}, 512, prg).data.size());
  }
  EXPECT_EQ(sizes.size(), 1u);
}

TEST(Onion, TamperedMiddleLayerFailsAtNextHop) {
  Servers sv(3);
  Prg prg(seed_from_u64(8));
  std::vector<RouteHop> route = {sv.hops[0], sv.hops[1]};
  BuiltOnion onion = build_onion(Bytes{9, 9}, route, sv.hops[2], DeadDrop{}, 128, prg);
  auto l0 = peel_layer(onion.data, sv.keys[0]);
  ASSERT_TRUE(l0);
  l0->inner[l0->inner.size() / 2] ^= 0x01;
  EXPECT_FALSE(peel_layer(l0->inner, sv.keys[1]));
}

TEST(Onion, OversizedPayloadIsRejected) {
  Servers sv(2);
  Prg prg(seed_from_u64(9));
  try {
    build_onion(Bytes(65, 0), std::vector<RouteHop>{sv.hops[0]}, sv.hops[1], DeadDrop{}, 64, prg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Onion, ReplyWithWrongKeyFails) {
  LayerKey k1{}, k2{};
  k2[0] = 1;
  Bytes sealed = seal_reply(Bytes{1, 2, 3}, k1);
  EXPECT_FALSE(open_reply(sealed, std::vector<LayerKey>{k2}));
}

MixnetConfig small_config(double noise = 0.0) {
  MixnetConfig c;
  c.servers = 5;
  c.hops = 3;
  c.noise_mean = noise;
  c.slot_size = 128;
  return c;
}

Submission submit(const Mixnet& net, std::uint32_t device, const DeadDrop& drop, ByteView payload,
                  Prg& prg, std::vector<LayerKey>& keys) {
  std::vector<RouteHop> route = net.random_route(prg);
  BuiltOnion onion = build_onion(payload, route, net.hop(drop.server), drop,
                                 net.config().slot_size, prg);
  keys = onion.reply_keys;
  return {device, 0, route[0].server, std::move(onion.data)};
}

Bytes padded(std::initializer_list<std::uint8_t> bytes, std::size_t size) {
  Bytes b(bytes);
  b.resize(size, 0);
  return b;
}

TEST(Mixnet, TwoWritersSwap) {
  Mixnet net(small_config(), seed_from_u64(1));
  Prg prg(seed_from_u64(2));
  DeadDrop drop = derive_drop(seed_from_u64(3), kQid, 0, 5);
  std::vector<LayerKey> ka, kb;
  std::vector<Submission> subs;
  subs.push_back(submit(net, 0, drop, Bytes{0xA}, prg, ka));
  subs.push_back(submit(net, 1, drop, Bytes{0xB}, prg, kb));
  auto out = net.run_round(0, std::move(subs));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(net.last_round().swaps, 1u);
  EXPECT_EQ(net.last_round().hop_legs, 8u);
  for (const Delivery& d : out) {
    auto opened = open_reply(d.reply, d.device == 0 ? ka : kb);
    ASSERT_TRUE(opened);
    EXPECT_EQ(*opened, padded({static_cast<std::uint8_t>(d.device == 0 ? 0xB : 0xA)}, 128));
  }
}

TEST(Mixnet, LoneWriterGetsEcho) {
  Mixnet net(small_config(), seed_from_u64(1));
  Prg prg(seed_from_u64(4));
  std::vector<LayerKey> k;
  std::vector<Submission> subs;
  subs.push_back(submit(net, 7, DeadDrop{{5}, 1}, Bytes{0x77}, prg, k));
  auto out = net.run_round(0, std::move(subs));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].device, 7u);
  EXPECT_EQ(*open_reply(out[0].reply, k), padded({0x77}, 128));
  EXPECT_EQ(net.last_round().echoes, 1u);
}

TEST(Mixnet, ThreeWayCollisionKeepsFirstTwo) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Mixnet net(small_config(), seed_from_u64(seed));
    Prg prg(seed_from_u64(100 + seed));
    DeadDrop drop{{0xCC}, 4};
    std::vector<std::vector<LayerKey>> keys(3);
    std::vector<Submission> subs;
    for (std::uint32_t d = 0; d < 3; ++d) {
      subs.push_back(submit(net, d, drop, Bytes{static_cast<std::uint8_t>(d)}, prg, keys[d]));
    }
    auto out = net.run_round(0, subs);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(net.last_round().collisions, 1u);
    Bytes a = *open_reply(out[0].reply, keys[out[0].device]);
    Bytes b = *open_reply(out[1].reply, keys[out[1].device]);
    EXPECT_EQ(a[0], out[1].device);
    EXPECT_EQ(b[0], out[0].device);

    // Same inputs, same server seed: the same pair survives.
    Mixnet again(small_config(), seed_from_u64(seed));
    auto out2 = again.run_round(0, std::move(subs));
    ASSERT_EQ(out2.size(), 2u);
    EXPECT_EQ(out2[0].device, out[0].device);
    EXPECT_EQ(out2[1].device, out[1].device);
  }
}

TEST(Mixnet, EveryLegHasOneOnionLength) {
  Mixnet net(small_config(3.0), seed_from_u64(11));
  Prg prg(seed_from_u64(12));
  std::vector<Submission> subs;
  std::vector<LayerKey> k;
  for (std::uint32_t d = 0; d < 20; ++d) {
    subs.push_back(submit(net, d, derive_drop(seed_from_u64(d / 2), kQid, 0, 5),
                          Bytes(d * 3, 1), prg, k));
  }
  auto out = net.run_round(0, std::move(subs));
  const RoundStats& st = net.last_round();
  EXPECT_TRUE(st.sizes_uniform);
  ASSERT_EQ(st.leg_sizes.size(), 4u);
  for (std::size_t leg = 0; leg < 4; ++leg) {
    EXPECT_EQ(st.leg_sizes[leg], onion_size(128, 3 - leg));
  }
  EXPECT_EQ(out.size(), 20u);
  EXPECT_EQ(st.swaps, 10u);
  for (const Delivery& d : out) EXPECT_EQ(d.reply.size(), reply_size(128, 4));
}

TEST(Mixnet, TamperedSubmissionIsDroppedAndCounted) {
  Mixnet net(small_config(), seed_from_u64(13));
  Prg prg(seed_from_u64(14));
  std::vector<LayerKey> k;
  std::vector<Submission> subs;
  subs.push_back(submit(net, 0, DeadDrop{{1}, 0}, Bytes{1}, prg, k));
  subs.push_back(submit(net, 1, DeadDrop{{2}, 0}, Bytes{2}, prg, k));
  subs[0].onion[40] ^= 0x80;
  auto out = net.run_round(0, std::move(subs));
  EXPECT_EQ(net.last_round().peel_failures, 1u);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].device, 1u);
}

TEST(Mixnet, NoiseFollowsPoissonPerServer) {
  const double mu = 6.0;
  Mixnet net(small_config(mu), seed_from_u64(21));
  std::vector<std::uint64_t> prev(5, 0);
  std::vector<double> samples;
  for (std::uint64_t r = 0; r < 200; ++r) {
    auto out = net.run_round(r, {});
    EXPECT_TRUE(out.empty());
    EXPECT_TRUE(net.last_round().sizes_uniform);
    for (std::uint32_t s = 0; s < 5; ++s) {
      samples.push_back(static_cast<double>(net.counters()[s].noise_generated - prev[s]));
      prev[s] = net.counters()[s].noise_generated;
    }
  }
  double mean = 0.0, var = 0.0;
  for (double x : samples) mean += x;
  mean /= samples.size();
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= samples.size() - 1;
  // 1000 samples: standard error of the mean is about 0.08.
  EXPECT_NEAR(mean, mu, 0.35);
  EXPECT_NEAR(var / mean, 1.0, 0.2);
  // Noise leaves through the drop hosts: every drop host peeled it.
  std::uint64_t hosted = 0;
  for (const auto& c : net.counters()) hosted += c.drops_hosted;
  EXPECT_GT(hosted, 0u);
}

TEST(Mixnet, RoutesAreUniform) {
  MixnetConfig c = small_config();
  c.servers = 10;
  c.hops = 14;
  Mixnet net(c, seed_from_u64(31));
  Prg prg(seed_from_u64(32));
  std::vector<std::uint64_t> counts(10);
  for (int i = 0; i < 10000; ++i) {
    for (const RouteHop& h : net.random_route(prg)) ++counts[h.server];
  }
  EXPECT_LT(chi_square(counts, 14000.0), 27.88);
}

TEST(Mixnet, ObservationLogOnlyWhereScripted) {
  Scenario sc({ScenarioAction{std::nullopt, 2u, std::nullopt, "log-observations", 0.0, ""}});
  Mixnet net(small_config(), seed_from_u64(41), sc);
  Prg prg(seed_from_u64(42));
  std::vector<LayerKey> k;
  std::vector<Submission> subs;
  for (std::uint32_t d = 0; d < 50; ++d) subs.push_back(submit(net, d, DeadDrop{{7}, 0}, {}, prg, k));
  std::size_t to_two = std::count_if(subs.begin(), subs.end(), [](auto& s) { return s.first_hop == 2; });
  net.run_round(0, std::move(subs));
  EXPECT_EQ(net.observations().size(), to_two);
  for (const Observation& o : net.observations()) EXPECT_EQ(o.server, 2u);
}

TEST(Mixnet, ScriptedDropsLoseTraffic) {
  Scenario sc({ScenarioAction{std::nullopt, std::nullopt, std::nullopt, "drop-fraction", 0.5, ""}});
  Mixnet net(small_config(), seed_from_u64(51), sc);
  Prg prg(seed_from_u64(52));
  std::vector<LayerKey> k;
  std::vector<Submission> subs;
  for (std::uint32_t d = 0; d < 100; ++d) subs.push_back(submit(net, d, DeadDrop{{static_cast<std::uint8_t>(d)}, 0}, {}, prg, k));
  auto out = net.run_round(0, std::move(subs));
  // Survival over three scripted hops is 1/8.
  EXPECT_LT(out.size(), 40u);
}

TEST(Mixnet, ConfigValidation) {
  MixnetConfig c = small_config();
  c.servers = 1;
  EXPECT_THROW(validate(c), Error);
  c = small_config();
  c.hops = 0;
  EXPECT_THROW(validate(c), Error);
  c = small_config();
  c.slot_size = 16;
  EXPECT_THROW(validate(c), Error);
}

Frame test_frame(std::uint16_t leaf, std::size_t size, std::uint8_t fill) {
  return Frame{FrameType::kAnnounce, leaf, Bytes(size, fill)};
}

// Two endpoints exchanging through a scripted mixnet until both streams drain
// or a channel gives up after its second loss.
struct Link {
  Mixnet& net;
  Seed k = seed_from_u64(77);
  Channel a{128, 0, false};
  Channel b{128, 1, false};
  std::vector<Frame> got_a, got_b;
  int losses_a = 0, losses_b = 0;
  Prg prg{seed_from_u64(78)};

  bool step(std::uint64_t round) {
    DeadDrop drop = derive_drop(k, kQid, round, net.config().servers);
    std::vector<LayerKey> ka, kb;
    std::vector<Submission> subs;
    subs.push_back(submit(net, 0, drop, a.fragment(), prg, ka));
    subs.push_back(submit(net, 1, drop, b.fragment(), prg, kb));
    bool data = a.last_was_data() || b.last_was_data();
    std::optional<Bytes> ra, rb;
    for (Delivery& d : net.run_round(round, std::move(subs))) {
      (d.device == 0 ? ra : rb) = open_reply(d.reply, d.device == 0 ? ka : kb);
    }
    for (Frame& f : a.receive(ra)) got_a.push_back(std::move(f));
    for (Frame& f : b.receive(rb)) got_b.push_back(std::move(f));
    if (a.last_outcome() != RoundOutcome::kDelivered && data && ++losses_a >= 2) a.close();
    if (b.last_outcome() != RoundOutcome::kDelivered && data && ++losses_b >= 2) b.close();
    return a.has_pending() || b.has_pending();
  }
};

TEST(Channel, StreamsSurviveFragmentation) {
  Mixnet net(small_config(), seed_from_u64(61));
  Link link{net};
  link.a.push({test_frame(0, 300, 1), test_frame(1, 5, 2)});
  link.b.push({test_frame(3, 1000, 3)});
  std::uint64_t round = 0;
  while (link.step(round)) ++round;
  ASSERT_EQ(link.got_b.size(), 2u);
  ASSERT_EQ(link.got_a.size(), 1u);
  EXPECT_EQ(link.got_b[0].body, Bytes(300, 1));
  EXPECT_EQ(link.got_b[1].leaf, 1u);
  EXPECT_EQ(link.got_a[0].body, Bytes(1000, 3));
  EXPECT_EQ(link.a.retransmissions(), 0u);
  // 1007 stream bytes at 118 per fragment.
  EXPECT_EQ(round + 1, 9u);
}

TEST(Channel, EchoIsALossAndTriggersResend) {
  Channel a(64, 0, false);
  a.push({test_frame(0, 10, 5)});
  Bytes first = a.fragment();
  EXPECT_TRUE(a.last_was_data());
  EXPECT_TRUE(a.receive(first).empty());
  EXPECT_EQ(a.last_outcome(), RoundOutcome::kEcho);
  Bytes second = a.fragment();
  EXPECT_EQ(first, second);
  EXPECT_EQ(a.retransmissions(), 1u);
  a.receive(std::nullopt);
  EXPECT_EQ(a.last_outcome(), RoundOutcome::kLost);
  EXPECT_TRUE(a.has_pending());
}

TEST(Channel, LoopbackDeliversToItself) {
  Channel self(64, 0, true);
  self.push({test_frame(2, 100, 9)});
  std::vector<Frame> got;
  while (self.has_pending()) {
    for (Frame& f : self.receive(self.fragment())) got.push_back(std::move(f));
  }
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].body, Bytes(100, 9));
}

TEST(Channel, DuplicateFragmentsAreIgnored) {
  Channel a(64, 0, false), b(64, 1, false);
  a.push({test_frame(0, 80, 4)});
  Bytes fa = a.fragment();
  Bytes fb = b.fragment();
  EXPECT_TRUE(b.receive(fa).empty());
  a.receive(fb);
  // b sees the first fragment again, then the second.
  b.fragment();
  EXPECT_TRUE(b.receive(fa).empty());
  auto frames = b.receive(a.fragment());
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].body, Bytes(80, 4));
}

TEST(Channel, ScriptedLossEndsInDeliveryOrAbortNeverAHang) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Scenario sc({ScenarioAction{std::nullopt, 0u, std::nullopt, "drop-fraction", 0.1, ""}});
    Mixnet net(small_config(), seed_from_u64(seed), sc);
    Link link{net};
    link.prg = Prg(seed_from_u64(500 + seed));
    link.a.push({test_frame(0, 2000, 1)});
    link.b.push({test_frame(0, 700, 2)});
    std::uint64_t round = 0;
    while (link.step(round)) {
      ASSERT_LT(++round, 200u);
    }
    if (!link.a.closed() && !link.b.closed()) {
      ASSERT_EQ(link.got_b.size(), 1u);
      EXPECT_EQ(link.got_b[0].body, Bytes(2000, 1));
      ASSERT_EQ(link.got_a.size(), 1u);
    } else {
      EXPECT_GE(std::max(link.losses_a, link.losses_b), 2);
    }
  }
}

TEST(Scenario, ParsesJsonLines) {
  Scenario sc = parse_scenario(
      "# comment\n"
      "{\"round\": 3, \"server\": 1, \"action\": \"drop-fraction\", \"parameter\": 0.1}\n"
      "\n"
      "{\"device\": 4, \"action\": \"builder-attack\", \"attack\": \"out-of-range\"}\n"
      "{\"server\": 2, \"action\": \"withhold-signature\"}\n");
  ASSERT_EQ(sc.actions().size(), 3u);
  EXPECT_DOUBLE_EQ(sc.server_param("drop-fraction", 1, 3), 0.1);
  EXPECT_DOUBLE_EQ(sc.server_param("drop-fraction", 1, 4), 0.0);
  EXPECT_DOUBLE_EQ(sc.server_param("drop-fraction", 0, 3), 0.0);
  EXPECT_EQ(sc.builder_attack(4), "out-of-range");
  EXPECT_FALSE(sc.builder_attack(5));
  EXPECT_TRUE(sc.server_flag("withhold-signature", 2));
  EXPECT_FALSE(sc.server_flag("withhold-signature", 1));
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  try {
    parse_scenario("{\"action\": \"drop-fraction\", \"parameter\": 0.5}\n{\"action\": \"explode\"}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_scenario("not json"), Error);
  EXPECT_THROW(parse_scenario("{\"action\": \"drop-fraction\", \"parameter\": 2}"), Error);
}

}  // namespace
}  // namespace colo
