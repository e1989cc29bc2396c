#define OPENSSL_SUPPRESS_DEPRECATED
#include "colo/core/group.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/err.h>
#include <openssl/obj_mac.h>
#include <sodium.h>

#include <cstring>
#include <memory>

#include "colo/core/error.hpp"
#include "colo/core/prg.hpp"

namespace colo {
namespace {

constexpr std::array<std::uint64_t, 4> kOrder = {
    0xF3B9CAC2FC632551ULL, 0xBCE6FAADA7179E84ULL, 0xFFFFFFFFFFFFFFFFULL,
    0xFFFFFFFF00000000ULL};

struct BnDeleter {
  void operator()(BIGNUM* b) const { BN_free(b); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;

BN_CTX* ctx() {
  struct Holder {
    BN_CTX* c = BN_CTX_new();
    ~Holder() { BN_CTX_free(c); }
  };
  thread_local Holder holder;
  return holder.c;
}

void check(int rc, const char* what) {
  if (rc != 1) fail(ErrorCode::kCrypto, what);
}

const EC_GROUP* group() {
  static const EC_GROUP* grp = [] {
    EC_GROUP* g = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
    if (g == nullptr) fail(ErrorCode::kCrypto, "P-256 unavailable");
    return g;
  }();
  return grp;
}

EC_POINT* new_point() {
  EC_POINT* p = EC_POINT_new(group());
  if (p == nullptr) fail(ErrorCode::kCrypto, "EC_POINT_new");
  return p;
}

BnPtr to_bn(const Scalar& s) {
  auto bytes = s.to_bytes();
  return BnPtr(BN_lebin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr));
}

bool less_than_order(const std::array<std::uint64_t, 4>& v) {
  for (int i = 3; i >= 0; --i) {
    if (v[i] != kOrder[i]) return v[i] < kOrder[i];
  }
  return false;
}

// out = a - b over 256 bits; returns the borrow.
unsigned sub_limbs(std::array<std::uint64_t, 4>& out, const std::array<std::uint64_t, 4>& a,
                   const std::array<std::uint64_t, 4>& b) {
  unsigned borrow = 0;
  for (int i = 0; i < 4; ++i) {
    unsigned __int128 d = static_cast<unsigned __int128>(a[i]) - b[i] - borrow;
    out[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<unsigned>((d >> 64) & 1);
  }
  return borrow;
}

unsigned add_limbs(std::array<std::uint64_t, 4>& out, const std::array<std::uint64_t, 4>& a,
                   const std::array<std::uint64_t, 4>& b) {
  unsigned __int128 carry = 0;
  for (int i = 0; i < 4; ++i) {
    carry += static_cast<unsigned __int128>(a[i]) + b[i];
    out[i] = static_cast<std::uint64_t>(carry);
    carry >>= 64;
  }
  return static_cast<unsigned>(carry);
}

// P-256 with g as its generator, so OpenSSL's precomputed fixed-base path applies to g.
const EC_GROUP* g_group() {
  static const EC_GROUP* grp = [] {
    EC_GROUP* gg = EC_GROUP_dup(group());
    if (gg == nullptr) fail(ErrorCode::kCrypto, "EC_GROUP_dup");
    check(EC_GROUP_set_generator(gg, GroupElement::g().raw(), EC_GROUP_get0_order(group()),
                                 EC_GROUP_get0_cofactor(group())),
          "set_generator");
    check(EC_GROUP_precompute_mult(gg, ctx()), "precompute");
    return gg;
  }();
  return grp;
}

}  // namespace

// ---- Scalar ----

Scalar Scalar::from_u64(std::uint64_t v) {
  Scalar s;
  s.limbs_[0] = v;
  return s;
}

std::optional<Scalar> Scalar::from_bytes(ByteView le) {
  if (le.size() != kBytes) return std::nullopt;
  Scalar s;
  for (int i = 0; i < 4; ++i) s.limbs_[i] = load_u64_le(le.data() + 8 * i);
  if (!less_than_order(s.limbs_)) return std::nullopt;
  return s;
}

Scalar Scalar::reduce(ByteView le) {
  BnPtr a(BN_lebin2bn(le.data(), static_cast<int>(le.size()), nullptr));
  BnPtr r(BN_new());
  check(BN_nnmod(r.get(), a.get(), EC_GROUP_get0_order(group()), ctx()), "nnmod");
  Encoding out{};
  check(BN_bn2lebinpad(r.get(), out.data(), static_cast<int>(out.size())) == 32 ? 1 : 0,
        "bn2bin");
  return *from_bytes(out);
}

Scalar Scalar::random(Prg& prg) {
  std::array<std::uint8_t, 64> wide{};
  prg.fill(wide);
  return reduce(wide);
}

const Scalar& Scalar::order_minus_one() {
  static const Scalar s = [] {
    Scalar x;
    x.limbs_ = kOrder;
    x.limbs_[0] -= 1;
    return x;
  }();
  return s;
}

Scalar::Encoding Scalar::to_bytes() const {
  Encoding out{};
  for (int i = 0; i < 4; ++i) store_u64_le(out.data() + 8 * i, limbs_[i]);
  return out;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r;
  unsigned carry = add_limbs(r.limbs_, limbs_, o.limbs_);
  if (carry || !less_than_order(r.limbs_)) sub_limbs(r.limbs_, r.limbs_, kOrder);
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r;
  if (sub_limbs(r.limbs_, limbs_, o.limbs_)) add_limbs(r.limbs_, r.limbs_, kOrder);
  return r;
}

Scalar Scalar::operator-() const { return Scalar() - *this; }

Scalar Scalar::operator*(const Scalar& o) const {
  BnPtr a = to_bn(*this);
  BnPtr b = to_bn(o);
  BnPtr r(BN_new());
  check(BN_mod_mul(r.get(), a.get(), b.get(), EC_GROUP_get0_order(group()), ctx()), "mul");
  Encoding out{};
  BN_bn2lebinpad(r.get(), out.data(), static_cast<int>(out.size()));
  return *from_bytes(out);
}

// ---- GroupElement ----

GroupElement::GroupElement() : p_(new_point()) {
  check(EC_POINT_set_to_infinity(group(), p_), "infinity");
}

GroupElement::GroupElement(const GroupElement& o)
    : p_(EC_POINT_dup(o.p_, group())), wire_(o.wire_) {
  if (p_ == nullptr) fail(ErrorCode::kCrypto, "EC_POINT_dup");
}

GroupElement::GroupElement(GroupElement&& o) noexcept : p_(o.p_), wire_(o.wire_) {
  o.p_ = nullptr;
}

GroupElement& GroupElement::operator=(const GroupElement& o) {
  if (this != &o) {
    if (p_ == nullptr) p_ = new_point();
    check(EC_POINT_copy(p_, o.p_), "copy");
    wire_ = o.wire_;
  }
  return *this;
}

GroupElement& GroupElement::operator=(GroupElement&& o) noexcept {
  std::swap(p_, o.p_);
  wire_ = o.wire_;
  return *this;
}

GroupElement::~GroupElement() { EC_POINT_free(p_); }

const GroupElement& GroupElement::h() {
  static const GroupElement h_pt(EC_POINT_dup(EC_GROUP_get0_generator(group()), group()));
  return h_pt;
}

const GroupElement& GroupElement::g() {
  static const GroupElement g_pt = hash_to_group(as_bytes("colo/P-256/value-base/v1"));
  return g_pt;
}

GroupElement GroupElement::hash_to_group(ByteView tag) {
  BnPtr x(BN_new());
  BnPtr p(BN_new());
  check(EC_GROUP_get_curve(group(), p.get(), nullptr, nullptr, ctx()), "curve");
  for (std::uint32_t counter = 0;; ++counter) {
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    crypto_hash_sha256_update(&st, tag.data(), tag.size());
    std::uint8_t ctr[4] = {static_cast<std::uint8_t>(counter),
                           static_cast<std::uint8_t>(counter >> 8),
                           static_cast<std::uint8_t>(counter >> 16),
                           static_cast<std::uint8_t>(counter >> 24)};
    crypto_hash_sha256_update(&st, ctr, sizeof(ctr));
    std::uint8_t digest[32];
    crypto_hash_sha256_final(&st, digest);
    BN_bin2bn(digest, 32, x.get());
    if (BN_cmp(x.get(), p.get()) >= 0) continue;
    GroupElement out;
    ERR_set_mark();
    int ok = EC_POINT_set_compressed_coordinates(group(), out.p_, x.get(), 0, ctx());
    ERR_pop_to_mark();
    if (ok == 1 && !out.is_identity()) return out;
  }
}

GroupElement GroupElement::mul_g(const Scalar& s) {
  BnPtr k = to_bn(s);
  GroupElement out;
  check(EC_POINT_mul(g_group(), out.p_, k.get(), nullptr, nullptr, ctx()), "mul");
  return out;
}

GroupElement GroupElement::mul_h(const Scalar& s) {
  BnPtr k = to_bn(s);
  GroupElement out;
  check(EC_POINT_mul(group(), out.p_, k.get(), nullptr, nullptr, ctx()), "mul");
  return out;
}

GroupElement GroupElement::mul_gh(const Scalar& a, const Scalar& b) {
  GroupElement out = mul_g(a);
  out += mul_h(b);
  return out;
}

GroupElement GroupElement::multiexp(std::span<const GroupElement* const> points,
                                    std::span<const Scalar> scalars, const Scalar& h_coeff) {
  require(points.size() == scalars.size(), ErrorCode::kInvalidArgument, "multiexp size mismatch");
  std::vector<const EC_POINT*> pts;
  std::vector<BnPtr> owned;
  std::vector<const BIGNUM*> bns;
  pts.reserve(points.size());
  owned.reserve(points.size());
  bns.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (scalars[i].is_zero() || points[i]->is_identity()) continue;
    pts.push_back(points[i]->p_);
    owned.push_back(to_bn(scalars[i]));
    bns.push_back(owned.back().get());
  }
  GroupElement out;
  if (pts.empty() && h_coeff.is_zero()) return out;
  BnPtr hk = to_bn(h_coeff);
  check(EC_POINTs_mul(group(), out.p_, h_coeff.is_zero() ? nullptr : hk.get(), pts.size(),
                      pts.data(), bns.data(), ctx()),
        "multiexp");
  return out;
}

std::optional<GroupElement> GroupElement::decode(ByteView bytes) {
  if (bytes.size() != kEncodedSize) return std::nullopt;
  Encoding wire{};
  std::memcpy(wire.data(), bytes.data(), kEncodedSize);
  GroupElement out;
  bool all_zero = true;
  for (std::uint8_t b : bytes) all_zero = all_zero && b == 0;
  if (!all_zero) {
    if (bytes[0] != 0x04) return std::nullopt;
    ERR_set_mark();
    int ok = EC_POINT_oct2point(group(), out.p_, bytes.data(), bytes.size(), ctx());
    ERR_pop_to_mark();
    if (ok != 1) return std::nullopt;
  }
  out.wire_ = wire;
  return out;
}

GroupElement::Encoding GroupElement::encode() const {
  if (wire_) return *wire_;
  Encoding out{};
  if (is_identity()) return out;
  std::size_t n = EC_POINT_point2oct(group(), p_, POINT_CONVERSION_UNCOMPRESSED, out.data(),
                                     out.size(), ctx());
  if (n != kEncodedSize) fail(ErrorCode::kCrypto, "point2oct");
  return out;
}

void GroupElement::normalize(std::span<GroupElement* const> points) {
  std::vector<EC_POINT*> raw;
  raw.reserve(points.size());
  for (GroupElement* p : points) {
    if (!p->is_identity()) raw.push_back(p->p_);
  }
  if (raw.empty()) return;
  check(EC_POINTs_make_affine(group(), raw.size(), raw.data(), ctx()), "affine");
}

GroupElement GroupElement::operator+(const GroupElement& o) const {
  GroupElement out;
  check(EC_POINT_add(group(), out.p_, p_, o.p_, ctx()), "add");
  return out;
}

GroupElement GroupElement::operator-(const GroupElement& o) const { return *this + (-o); }

GroupElement GroupElement::operator-() const {
  GroupElement out(*this);
  out.wire_.reset();
  check(EC_POINT_invert(group(), out.p_, ctx()), "invert");
  return out;
}

GroupElement GroupElement::operator*(const Scalar& s) const {
  BnPtr k = to_bn(s);
  GroupElement out;
  check(EC_POINT_mul(group(), out.p_, nullptr, p_, k.get(), ctx()), "mul");
  return out;
}

GroupElement& GroupElement::operator+=(const GroupElement& o) {
  check(EC_POINT_add(group(), p_, p_, o.p_, ctx()), "add");
  wire_.reset();
  return *this;
}

GroupElement& GroupElement::operator-=(const GroupElement& o) {
  *this += -o;
  return *this;
}

bool GroupElement::is_identity() const { return EC_POINT_is_at_infinity(group(), p_) == 1; }

bool GroupElement::operator==(const GroupElement& o) const {
  int rc = EC_POINT_cmp(group(), p_, o.p_, ctx());
  if (rc < 0) fail(ErrorCode::kCrypto, "EC_POINT_cmp");
  return rc == 0;
}

}  // namespace colo
