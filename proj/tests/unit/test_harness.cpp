#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#include "colo/core/error.hpp"
#include "colo/harness/attributes.hpp"
#include "colo/harness/bench.hpp"
#include "colo/harness/config.hpp"
#include "colo/harness/graph.hpp"
#include "colo/harness/metrics.hpp"
#include "colo/harness/oracle.hpp"
#include "colo/harness/simulation.hpp"
#include "corpus.hpp"

namespace colo {
namespace {

using testing::corpus_certified;
using testing::corpus_path;
using testing::corpus_query;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// ---- graphs ----

TEST(Graph, EmptyEdgeListIsAnEmptyGraph) {
  Graph g = parse_snap("");
  EXPECT_EQ(g.nodes, 0u);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(parse_snap("# only a comment\n\n").nodes, 0u);
}

TEST(Graph, SnapLinesCommentsAndRelabelling) {
  Graph g = parse_snap("# FromNodeId ToNodeId\n10 20\n20\t30\n% other comment\n30 10\r\n");
  EXPECT_EQ(g.nodes, 3u);
  EdgeList want = {{0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(g.edges, want);
}

TEST(Graph, DuplicatesAreDroppedAndCounted) {
  Graph g = parse_snap("1 2\n2 1\n1 2\n3 3\n2 3\n");
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.duplicate_edges, 2u);
  EXPECT_EQ(g.self_loops, 1u);
}

TEST(Graph, MalformedLineReportsItsNumber) {
  try {
    parse_snap("1 2\n# ok\n3 x\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { parse_snap("1 2 3\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_snap("-1 2\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { load_snap("/nonexistent/graph.txt"); }), ErrorCode::kIo);
}

TEST(Graph, GeneratedMeanDegreeWithinTwentyPercent) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Prg prg(seed_from_u64(seed));
    Graph g = gen_graph(100, 10.0, 20, prg);
    EXPECT_NEAR(g.mean_degree(), 10.0, 2.0);
    EXPECT_LE(g.max_degree(), 20u);
  }
}

TEST(Graph, SingleNodeHasNoEdges) {
  Prg prg(seed_from_u64(1));
  Graph g = gen_graph(1, 0.0, 10, prg);
  EXPECT_EQ(g.nodes, 1u);
  EXPECT_TRUE(g.edges.empty());
}

TEST(Graph, GenerationIsDeterministic) {
  Prg a(seed_from_u64(9)), b(seed_from_u64(9)), c(seed_from_u64(10));
  Graph ga = gen_graph(200, 4.0, 10, a);
  Graph gb = gen_graph(200, 4.0, 10, b);
  Graph gc = gen_graph(200, 4.0, 10, c);
  EXPECT_EQ(ga.edges, gb.edges);
  EXPECT_NE(ga.edges, gc.edges);
}

TEST(Graph, InfeasibleDegreeRequestIsAConfigError) {
  Prg prg(seed_from_u64(1));
  EXPECT_EQ(code_of([&] { gen_graph(10, 12.0, 20, prg); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { gen_graph(100, 5.0, 3, prg); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { gen_graph(0, 0.0, 3, prg); }), ErrorCode::kConfig);
}

TEST(Graph, CirculantIsRegular) {
  for (auto [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{{52, 1}, {52, 10}, {52, 50}, {9, 4}}) {
    Graph g = circulant(n, d);
    auto deg = g.degrees();
    EXPECT_TRUE(std::all_of(deg.begin(), deg.end(), [&](std::size_t x) { return x == d; }))
        << n << " " << d;
  }
  EXPECT_EQ(code_of([] { circulant(9, 3); }), ErrorCode::kConfig);
}

TEST(Graph, RewirePreservesDegrees) {
  Prg prg(seed_from_u64(4));
  Graph g = gen_graph(60, 4.0, 10, prg);
  Graph r = rewire(g, 200, prg);
  EXPECT_EQ(g.degrees(), r.degrees());
  EXPECT_NE(g.edges, r.edges);
}

TEST(Graph, SubsampleKeepsAnInducedConnectedCore) {
  Prg prg(seed_from_u64(5));
  Graph g = circulant(100, 4);
  Graph s = subsample(g, 30, prg);
  EXPECT_EQ(s.nodes, 30u);
  for (auto [u, v] : s.edges) EXPECT_LT(v, 30u);
  EXPECT_GE(s.edges.size(), 29u);
}

// ---- oracle ----

Attributes flat_attributes(const Graph& g, const std::vector<std::int64_t>& inf) {
  Attributes a;
  for (std::int64_t v : inf) a.node.push_back({{"inf", v}});
  for (auto e : g.edges) a.edge[e] = {};
  return a;
}

// Independent reference: adjacency matrix and a double loop over ordered pairs.
std::uint64_t brute_force_q1(const Graph& g, const std::vector<std::int64_t>& inf) {
  std::vector<std::vector<bool>> adj(g.nodes, std::vector<bool>(g.nodes, false));
  for (auto [u, v] : g.edges) adj[u][v] = adj[v][u] = true;
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < g.nodes; ++a) {
    for (std::size_t b = 0; b < g.nodes; ++b) {
      if (adj[a][b] && inf[a] == 1 && inf[b] == 1) ++total;
    }
  }
  return total;
}

TEST(Oracle, TriangleCountsOrderedPairs) {
  Graph g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  auto out = oracle(corpus_query(1), g, flat_attributes(g, {1, 1, 1}), DirectionPolicy::kBoth);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].value, 6u);
  auto single = oracle(corpus_query(1), g, flat_attributes(g, {1, 1, 1}), DirectionPolicy::kSingle);
  EXPECT_EQ(single[0].value, 3u);
}

TEST(Oracle, AllZeroIsZero) {
  Prg prg(seed_from_u64(3));
  Graph g = gen_graph(50, 4.0, 10, prg);
  auto out = oracle(corpus_query(1), g, flat_attributes(g, std::vector<std::int64_t>(50, 0)),
                    DirectionPolicy::kBoth);
  EXPECT_EQ(out[0].value, 0u);
}

TEST(Oracle, PathMatchesBruteForce) {
  Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  std::vector<std::int64_t> inf = {1, 1, 0, 1, 0};
  auto out = oracle(corpus_query(1), g, flat_attributes(g, inf), DirectionPolicy::kBoth);
  EXPECT_EQ(out[0].value, brute_force_q1(g, inf));
  EXPECT_EQ(out[0].value, 2u);
}

TEST(Oracle, RandomGraphsMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Prg prg(seed_from_u64(100 + seed));
    Graph g = gen_graph(40, 3.0, 8, prg);
    std::vector<std::int64_t> inf(40);
    for (auto& v : inf) v = static_cast<std::int64_t>(prg.uniform(2));
    auto out = oracle(corpus_query(1), g, flat_attributes(g, inf), DirectionPolicy::kBoth);
    EXPECT_EQ(out[0].value, brute_force_q1(g, inf));
  }
}

TEST(Oracle, SynthesizedAttributesStayInDomains) {
  QueryPlan plan = corpus_query(2);
  Prg prg(seed_from_u64(8));
  Graph g = gen_graph(40, 3.0, 8, prg);
  Attributes a = synthesize_attributes(g, plan.preprocess, seed_from_u64(2));
  std::set<std::int64_t> seen_t;
  for (const auto& node : a.node) {
    EXPECT_TRUE(node.at("inf") == 0 || node.at("inf") == 1);
    EXPECT_GE(node.at("tInf"), 1);
    EXPECT_LE(node.at("tInf"), 30);
    seen_t.insert(node.at("tInf"));
  }
  EXPECT_GT(seen_t.size(), 10u);
  for (auto e : g.edges) {
    EXPECT_LE(a.edge_of(e.second, e.first).at("edge.duration"), 15);
  }
  Attributes again = synthesize_attributes(g, plan.preprocess, seed_from_u64(2));
  EXPECT_EQ(a.node, again.node);
}

// ---- config ----

TEST(Config, FlagsAndDefaults) {
  RunConfig c = parse_run_args({"--query", "q.colo", "--gen-n", "10", "--servers", "7",
                                "--malicious-frac", "0.3", "--direction", "single"});
  EXPECT_EQ(c.servers, 7u);
  EXPECT_DOUBLE_EQ(c.malicious_frac, 0.3);
  EXPECT_EQ(c.direction, DirectionPolicy::kSingle);
  EXPECT_EQ(c.hops, 14u);
  EXPECT_DOUBLE_EQ(c.noise_mean, 500.0);
  EXPECT_EQ(c.degree_bound, 10u);
}

TEST(Config, KeyValueFile) {
  auto path = std::filesystem::temp_directory_path() / "colo_config_test.toml";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("# run configuration\nquery = \"q.colo\"\ngen-n = 25\nhops = 3\nnoise-mean = 12.5\n", f);
    std::fclose(f);
  }
  RunConfig c = parse_run_args({"--config", path.string(), "--servers", "9"});
  EXPECT_EQ(c.query, "q.colo");
  EXPECT_EQ(c.gen_n, 25u);
  EXPECT_EQ(c.hops, 3u);
  EXPECT_DOUBLE_EQ(c.noise_mean, 12.5);
  EXPECT_EQ(c.servers, 9u);
  std::filesystem::remove(path);
}

TEST(Config, InvariantsAreEnforced) {
  auto bad = [](std::vector<std::string> extra) {
    std::vector<std::string> args = {"--query", "q.colo", "--gen-n", "10"};
    args.insert(args.end(), extra.begin(), extra.end());
    return code_of([&] { parse_run_args(args); });
  };
  EXPECT_EQ(bad({"--malicious-frac", "0.5"}), ErrorCode::kConfig);
  EXPECT_EQ(bad({"--malicious-frac", "-0.1"}), ErrorCode::kConfig);
  EXPECT_EQ(bad({"--degree-bound", "0"}), ErrorCode::kConfig);
  EXPECT_EQ(bad({"--servers", "1"}), ErrorCode::kConfig);
  EXPECT_EQ(bad({"--hops", "0"}), ErrorCode::kConfig);
  EXPECT_EQ(bad({"--direction", "sideways"}), ErrorCode::kConfig);
  EXPECT_EQ(bad({"--unknown-flag"}), ErrorCode::kConfig);
  EXPECT_EQ(code_of([] { parse_run_args({"--gen-n", "10"}); }), ErrorCode::kConfig);
}

// ---- metrics ----

TEST(Metrics, JsonLinesAndCsv) {
  std::vector<MetricsRecord> recs = {{"device", 0, "localagg", {{"b", 2}, {"a", 1}}},
                                     {"server", 3, "aggregation", {{"c", 5}}}};
  EXPECT_EQ(metrics_jsonl(recs),
            "{\"counters\":{\"a\":1,\"b\":2},\"entity\":\"device\",\"id\":0,\"phase\":\"localagg\"}\n"
            "{\"counters\":{\"c\":5},\"entity\":\"server\",\"id\":3,\"phase\":\"aggregation\"}\n");
  EXPECT_EQ(metrics_csv(recs), "entity,id,phase,a,b,c\ndevice,0,localagg,1,2,\nserver,3,aggregation,,,5\n");
  EXPECT_EQ(metrics_total(recs, "device", "localagg", "b"), 2u);
  EXPECT_EQ(metrics_total(recs, "device", "localagg", "c"), 0u);
}

TEST(Bench, LinearFit) {
  std::vector<double> x = {1, 2, 3, 4};
  std::vector<double> y = {3, 5, 7, 9};
  EXPECT_DOUBLE_EQ(linear_r2(x, y), 1.0);
  std::vector<double> flat = {1, 5, 1, 5};
  EXPECT_LT(linear_r2(x, flat), 0.5);
}

TEST(Bench, LengthQueryHasRequestedTable) {
  for (std::uint64_t len : {2u, 60u, 240u, 1000u}) {
    QueryPlan p = parse_query(length_query(len));
    EXPECT_EQ(p.table_length, len);
  }
}

// ---- end-to-end ----

RunConfig small_config(std::uint64_t seed = 11) {
  RunConfig c;
  c.servers = 5;
  c.hops = 2;
  c.noise_mean = 3;
  c.slot_size = 8192;
  c.degree_bound = 4;
  c.seed = seed;
  return c;
}

RunInputs corpus_inputs(int q, std::size_t n, double degree, std::uint64_t seed) {
  RunInputs in;
  in.plan = corpus_query(q);
  in.certified = corpus_certified();
  Prg prg(seed_from_u64(seed));
  in.graph = gen_graph(n, degree, 6, prg);
  return in;
}

TEST(Run, EveryCorpusQueryMatchesTheOracle) {
  for (int q = 1; q <= 8; ++q) {
    RunResult r = simulate(small_config(), corpus_inputs(q, 16, 2.0, 40 + q));
    EXPECT_TRUE(r.diag.matches_oracle) << "q" << q;
    EXPECT_EQ(r.diag.frames_sent, r.diag.frames_delivered) << "q" << q;
    EXPECT_EQ(r.diag.leaf_sessions_aborted, 0u);
    EXPECT_EQ(r.diag.drop_mismatches, 0u);
    EXPECT_GT(r.diag.drop_checks, 0u);
    EXPECT_TRUE(r.diag.onion_sizes_uniform);
    EXPECT_TRUE(r.diag.bytes_conserved);
    EXPECT_EQ(r.report, plaintext_answer(small_config(), corpus_inputs(q, 16, 2.0, 40 + q)));
  }
}

TEST(Run, SingleDirectionPolicy) {
  RunConfig c = small_config();
  c.direction = DirectionPolicy::kSingle;
  RunInputs in = corpus_inputs(1, 20, 3.0, 5);
  RunResult r = simulate(c, in);
  EXPECT_TRUE(r.diag.matches_oracle);
  EXPECT_EQ(r.diag.directed_sessions, r.diag.edges);
}

TEST(Run, FullLengthRoutes) {
  RunConfig c = small_config();
  c.hops = 14;
  RunResult r = simulate(c, corpus_inputs(1, 10, 2.0, 4));
  EXPECT_TRUE(r.diag.matches_oracle);
  EXPECT_TRUE(r.diag.bytes_conserved);
  EXPECT_EQ(r.diag.frames_delivered, r.diag.frames_sent);
}

TEST(Run, DeviceCryptoCountsAreExact) {
  RunConfig c = small_config();
  RunInputs in = corpus_inputs(6, 14, 2.0, 3);
  RunResult r = simulate(c, in);
  std::uint64_t len = 0;
  for (const QueryPlan* leaf : in.plan.leaves()) len += leaf->table_length;
  const std::uint64_t L = in.plan.leaves().size();
  for (const MetricsRecord& m : r.metrics) {
    if (m.entity != "device" || m.phase != "localagg") continue;
    EXPECT_EQ(m.counters.at("commitments"), c.degree_bound * len);
    EXPECT_EQ(m.counters.at("proof_entries"), c.degree_bound * len);
    EXPECT_EQ(m.counters.at("ot_sender_sessions"), c.degree_bound * L);
    EXPECT_EQ(m.counters.at("ot_receiver_sessions"), c.degree_bound * L);
    EXPECT_EQ(m.counters.at("onions_sent"), c.degree_bound * r.diag.rounds);
    EXPECT_EQ(m.counters.at("onion_layers_built"), (c.hops + 1) * m.counters.at("onions_sent"));
  }
}

TEST(Run, ServerByteConservation) {
  RunResult r = simulate(small_config(), corpus_inputs(4, 20, 3.0, 8));
  std::uint64_t in = metrics_total(r.metrics, "server", "localagg", "bytes_in");
  std::uint64_t out = metrics_total(r.metrics, "server", "localagg", "bytes_out");
  std::uint64_t dev_in = metrics_total(r.metrics, "server", "localagg", "device_bytes_in");
  std::uint64_t dev_out = metrics_total(r.metrics, "server", "localagg", "device_bytes_out");
  EXPECT_EQ(in - dev_in, out - dev_out);
  EXPECT_EQ(dev_in, metrics_total(r.metrics, "device", "localagg", "onion_bytes_sent"));
  EXPECT_EQ(dev_out, metrics_total(r.metrics, "device", "localagg", "reply_bytes_received"));
  EXPECT_TRUE(r.diag.bytes_conserved);
}

TEST(Run, IdenticalConfigsGiveIdenticalOutputs) {
  RunInputs in = corpus_inputs(7, 18, 2.5, 21);
  RunResult a = simulate(small_config(5), in);
  RunResult b = simulate(small_config(5), in);
  EXPECT_EQ(report_text(a), report_text(b));
  EXPECT_EQ(metrics_jsonl(a.metrics), metrics_jsonl(b.metrics));
  RunResult c = simulate(small_config(6), in);
  EXPECT_NE(metrics_jsonl(a.metrics), metrics_jsonl(c.metrics));
}

TEST(Run, MaliciousBuilderIsExcludedAndCounted) {
  RunInputs in = corpus_inputs(3, 16, 3.0, 12);
  in.scenario = parse_scenario(
      "{\"device\": 2, \"action\": \"builder-attack\", \"attack\": \"out-of-range\"}\n"
      "{\"device\": 5, \"action\": \"builder-attack\", \"attack\": \"wrong-opening\"}\n");
  RunResult r = simulate(small_config(), in);
  EXPECT_GT(r.diag.leaf_sessions_aborted, 0u);
  EXPECT_TRUE(r.diag.matches_surviving_oracle);
  EXPECT_GT(r.diag.abort_reasons["proof-rejected"] + r.diag.abort_reasons["opening-mismatch"], 0u)
      << r.metrics.back().to_json().dump();
}

TEST(Run, RejectedDistributionAborts) {
  RunInputs in = corpus_inputs(1, 10, 2.0, 1);
  RunConfig c = small_config();
  in.scenario = parse_scenario("{\"action\": \"withhold-signature\"}\n");
  EXPECT_EQ(code_of([&] { simulate(c, in); }), ErrorCode::kProtocolAbort);

  in.scenario = parse_scenario("{\"server\": 0, \"action\": \"forge-signature\"}\n");
  EXPECT_TRUE(simulate(c, in).diag.matches_oracle);

  in.scenario = {};
  in.certified = {};
  EXPECT_EQ(code_of([&] { simulate(c, in); }), ErrorCode::kProtocolAbort);
}

TEST(Run, TamperedShareIsVisible) {
  RunInputs in = corpus_inputs(1, 20, 3.0, 2);
  in.scenario = parse_scenario("{\"server\": 1, \"action\": \"drop-share\", \"parameter\": 1}\n");
  RunResult r = simulate(small_config(), in);
  EXPECT_FALSE(r.diag.matches_oracle);
  in.scenario = parse_scenario("{\"server\": 3, \"action\": \"duplicate-share\", \"parameter\": 1}\n");
  EXPECT_FALSE(simulate(small_config(), in).diag.matches_oracle);
}

TEST(Run, LossyServersTerminate) {
  RunInputs in = corpus_inputs(4, 12, 2.0, 6);
  in.scenario = parse_scenario("{\"server\": 2, \"action\": \"drop-fraction\", \"parameter\": 0.5}\n");
  RunConfig c = small_config();
  c.max_rounds = 200;
  RunResult r = simulate(c, in);
  EXPECT_LT(r.diag.rounds, 200u);
  EXPECT_GT(r.diag.losses, 0u);
  EXPECT_GT(r.diag.transport_aborts, 0u);
  EXPECT_GT(metrics_total(r.metrics, "server", "localagg", "scripted_drops"), 0u);
  // Drops happen inside a server, so server-to-server transit still balances.
  EXPECT_TRUE(r.diag.bytes_conserved);
}

TEST(Run, FirstHopObservationsDoNotDependOnTopology) {
  Prg prg(seed_from_u64(30));
  RunInputs in = corpus_inputs(1, 24, 3.0, 30);
  in.graph = gen_graph(24, 3.0, 4, prg);
  in.scenario = parse_scenario("{\"server\": 0, \"action\": \"log-observations\"}\n");
  RunInputs other = in;
  other.graph = rewire(in.graph, 100, prg);
  ASSERT_NE(other.graph.edges, in.graph.edges);
  RunResult a = simulate(small_config(), in);
  RunResult b = simulate(small_config(), other);
  ASSERT_FALSE(a.observations.empty());
  ASSERT_EQ(a.observations.size(), b.observations.size());
  for (std::size_t i = 0; i < a.observations.size(); ++i) {
    EXPECT_EQ(a.observations[i].device, b.observations[i].device);
    EXPECT_EQ(a.observations[i].bytes, b.observations[i].bytes);
    EXPECT_EQ(a.observations[i].round, b.observations[i].round);
  }
}

TEST(Run, LoadInputsTagsThePhase) {
  RunConfig c = small_config();
  c.query = "/nonexistent/q.colo";
  c.gen_n = 5;
  try {
    load_inputs(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_EQ(std::string(e.what()).rfind("query: ", 0), 0u) << e.what();
  }
  c.query = corpus_path(1);
  c.gen_n = 0;
  EXPECT_EQ(code_of([&] { load_inputs(c); }), ErrorCode::kConfig);
  c.gen_n = 12;
  RunInputs in = load_inputs(c);
  EXPECT_EQ(in.graph.nodes, 12u);
  EXPECT_FALSE(in.certified.empty());
}

}  // namespace
}  // namespace colo
