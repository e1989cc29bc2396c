#include <gtest/gtest.h>

#include <set>

#include "colo/core/bytes.hpp"
#include "colo/core/error.hpp"
#include "colo/core/group.hpp"
#include "colo/core/hash.hpp"
#include "colo/core/prg.hpp"
#include "colo/core/ring.hpp"

using namespace colo;

namespace {

Seed test_seed(std::uint8_t start = 0) {
  Seed s{};
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::uint8_t>(start + i);
  return s;
}

}  // namespace

TEST(Ring, AddExamples) {
  RingElement x(0x1234);
  EXPECT_EQ(ring_add(RingElement(0), x), x);
  EXPECT_EQ(ring_add(RingElement(~std::uint64_t{0}), RingElement(1)), RingElement(0));
  EXPECT_EQ(ring_add(RingElement(5), ring_neg(RingElement(5))), RingElement(0));
}

TEST(Ring, AbelianGroupProperties) {
  Prg prg(test_seed(), "ring-props");
  for (int i = 0; i < 1000; ++i) {
    RingElement a(prg.next_u64()), b(prg.next_u64()), c(prg.next_u64());
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a + RingElement(0), a);
    EXPECT_EQ(a + ring_neg(a), RingElement(0));
  }
}

TEST(Prg, ExpandMatchesReferenceVector) {
  Bytes out = prg_expand(test_seed(), "abc", 40);
  EXPECT_EQ(to_hex(out),
            "591cb481fcc22124c9893e1b2222236fa8b95f668fff3dffd6073abda45884acbfa11db72acdcb93");
}

TEST(Prg, ExpandIsDeterministic) {
  EXPECT_EQ(prg_expand(test_seed(), "label", 77), prg_expand(test_seed(), "label", 77));
}

TEST(Prg, ExpandRejectsZeroLength) {
  try {
    prg_expand(test_seed(), "label", 0);
    FAIL() << "expected precondition error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(Prg, DifferingLabelsGiveDifferentOutputs) {
  Prg labels(test_seed(3), "labels");
  for (int i = 0; i < 1000; ++i) {
    Bytes a = labels.bytes(12);
    Bytes b = labels.bytes(12);
    if (a == b) continue;
    EXPECT_NE(prg_expand(test_seed(), a, 16), prg_expand(test_seed(), b, 16));
  }
}

TEST(Prg, StreamIsPositionConsistent) {
  Prg one(test_seed(), "stream");
  Bytes whole = one.bytes(200);
  Prg two(test_seed(), "stream");
  Bytes parts;
  for (std::size_t n : {1, 63, 2, 64, 70}) {
    Bytes p = two.bytes(n);
    parts.insert(parts.end(), p.begin(), p.end());
  }
  EXPECT_EQ(whole, parts);
  EXPECT_EQ(two.counter(), 200u);
}

TEST(Prg, UniformStaysInRange) {
  Prg prg(test_seed(), "uniform");
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto v = prg.uniform(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 1000, 150);
  for (int i = 0; i < 100; ++i) {
    auto v = prg.uniform_range(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
  }
}

TEST(Prg, PoissonMeanAndVariance) {
  Prg prg(test_seed(), "poisson");
  for (double mean : {0.5, 4.0, 75.0}) {
    double sum = 0, sq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      double k = static_cast<double>(sample_poisson(mean, prg));
      sum += k;
      sq += k * k;
    }
    double m = sum / n;
    double var = sq / n - m * m;
    EXPECT_NEAR(m, mean, 0.05 * mean + 0.05);
    EXPECT_NEAR(var, mean, 0.1 * mean + 0.1);
  }
}

TEST(HashToScalar, EmptyTranscriptConstant) {
  Scalar s = hash_to_scalar({});
  EXPECT_EQ(to_hex(s.to_bytes()),
            "babc404cccff3f1978a74fc9be13325bc214a4147f1d126d15ed3b83c5351800");
}

TEST(HashToScalar, DeterministicAndCollisionFree) {
  Prg prg(test_seed(), "h2s");
  std::set<Scalar::Encoding> seen;
  for (int i = 0; i < 1000; ++i) {
    Bytes t = prg.bytes(1 + prg.uniform(64));
    EXPECT_EQ(hash_to_scalar(t), hash_to_scalar(t));
    seen.insert(hash_to_scalar(t).to_bytes());
  }
  EXPECT_GE(seen.size(), 995u);  // random transcripts of length 1 may repeat
}

TEST(Scalar, ArithmeticMatchesFieldLaws) {
  Prg prg(test_seed(), "scalar");
  Scalar one = Scalar::from_u64(1);
  EXPECT_EQ(Scalar::order_minus_one() + one, Scalar());
  EXPECT_EQ(Scalar() - one, Scalar::order_minus_one());
  for (int i = 0; i < 200; ++i) {
    Scalar a = Scalar::random(prg), b = Scalar::random(prg), c = Scalar::random(prg);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) - b, a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + (-a), Scalar());
    EXPECT_EQ(*Scalar::from_bytes(a.to_bytes()), a);
  }
  Scalar::Encoding big{};
  big.fill(0xff);
  EXPECT_FALSE(Scalar::from_bytes(big).has_value());
}

TEST(Group, ValueBaseMatchesReferenceDerivation) {
  EXPECT_EQ(to_hex(GroupElement::g().encode()),
            "04a5ff527c537cee20f255bef2f54dd39fda1725b561361ec7a72f2e632c4f9eb6"
            "07c61a51614769a17a1d7c9530293f34a01f241d33aa62724400f2eb6da40ec2");
  EXPECT_FALSE(GroupElement::g() == GroupElement::h());
}

TEST(Group, OrderTimesPointIsIdentity) {
  Scalar n_minus_1 = Scalar::order_minus_one();
  for (const GroupElement* base : {&GroupElement::g(), &GroupElement::h()}) {
    GroupElement p = *base * n_minus_1;
    EXPECT_TRUE((p + *base).is_identity());
  }
}

TEST(Group, ExponentLaws) {
  Prg prg(test_seed(), "exp-laws");
  for (int i = 0; i < 20; ++i) {
    Scalar a = Scalar::random(prg), b = Scalar::random(prg);
    EXPECT_EQ(GroupElement::mul_g(a) * b, GroupElement::mul_g(a * b));
    EXPECT_EQ(GroupElement::mul_g(a) + GroupElement::mul_g(b), GroupElement::mul_g(a + b));
    EXPECT_EQ(GroupElement::mul_h(a) * b, GroupElement::h() * (a * b));
    EXPECT_EQ(GroupElement::mul_g(a), GroupElement::g() * a);
    GroupElement x = GroupElement::mul_h(a), y = GroupElement::mul_g(b);
    EXPECT_EQ(x + y, y + x);
    EXPECT_EQ((x + y) - y, x);
  }
}

TEST(Group, MultiexpMatchesNaive) {
  Prg prg(test_seed(), "multiexp");
  std::vector<GroupElement> pts;
  std::vector<Scalar> sc;
  for (int i = 0; i < 9; ++i) {
    pts.push_back(GroupElement::mul_h(Scalar::random(prg)));
    sc.push_back(Scalar::random(prg));
  }
  sc[3] = Scalar();
  Scalar hc = Scalar::random(prg);
  GroupElement naive = GroupElement::mul_h(hc);
  std::vector<const GroupElement*> ptrs;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    naive += pts[i] * sc[i];
    ptrs.push_back(&pts[i]);
  }
  EXPECT_EQ(GroupElement::multiexp(ptrs, sc, hc), naive);
}

TEST(Group, EncodingRoundTrip) {
  Prg prg(test_seed(), "encoding");
  for (int i = 0; i < 20; ++i) {
    GroupElement p = GroupElement::mul_gh(Scalar::random(prg), Scalar::random(prg));
    auto enc = p.encode();
    auto back = GroupElement::decode(enc);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, p);
    EXPECT_EQ(back->encode(), enc);
  }
  GroupElement id;
  auto enc = id.encode();
  for (auto b : enc) EXPECT_EQ(b, 0);
  EXPECT_TRUE(GroupElement::decode(enc)->is_identity());
  enc[0] = 0x04;
  enc[64] = 1;
  EXPECT_FALSE(GroupElement::decode(enc).has_value());
  EXPECT_FALSE(GroupElement::decode(ByteView(enc.data(), 33)).has_value());
}

TEST(Group, NormalizePreservesValue) {
  Prg prg(test_seed(), "normalize");
  std::vector<GroupElement> pts;
  for (int i = 0; i < 5; ++i) {
    pts.push_back(GroupElement::mul_g(Scalar::random(prg)) + GroupElement::mul_h(Scalar::random(prg)));
  }
  pts.push_back(GroupElement());
  std::vector<GroupElement> copy = pts;
  std::vector<GroupElement*> ptrs;
  for (auto& p : pts) ptrs.push_back(&p);
  GroupElement::normalize(ptrs);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(pts[i], copy[i]);
    EXPECT_EQ(pts[i].encode(), copy[i].encode());
  }
}

TEST(Bytes, ReaderRejectsTruncation) {
  ByteWriter w;
  w.u32(7);
  w.blob(as_bytes("hello"));
  Bytes b = w.take();
  ByteReader r(b);
  EXPECT_EQ(r.u32(), 7u);
  ByteView blob = r.blob();
  EXPECT_EQ(std::string(blob.begin(), blob.end()), "hello");
  EXPECT_TRUE(r.done());
  b.pop_back();
  ByteReader r2(b);
  r2.u32();
  EXPECT_THROW(r2.blob(), Error);
}

TEST(Bytes, HexRoundTrip) {
  Bytes b = {0x00, 0xab, 0x10};
  EXPECT_EQ(to_hex(b), "00ab10");
  EXPECT_EQ(from_hex("00ab10"), b);
  EXPECT_THROW(from_hex("zz"), Error);
}
