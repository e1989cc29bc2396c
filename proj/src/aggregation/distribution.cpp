#include "colo/aggregation/distribution.hpp"

#include <sodium.h>

#include <cmath>
#include <set>

#include "colo/core/error.hpp"

namespace colo {

ServerSigningKey signing_keypair(const Seed& seed) {
  ServerSigningKey k;
  crypto_sign_seed_keypair(k.pk.data(), k.sk.data(), seed.data());
  return k;
}

Bytes query_signing_message(std::string_view canonical) {
  ByteWriter w;
  w.raw(as_bytes("colo/query-signature/v1"));
  w.blob(as_bytes(canonical));
  return w.take();
}

SignedQuery sign_and_broadcast(const QueryPlan& plan, std::span<const ServerSigningKey> keys,
                               std::span<const std::string> certified,
                               const Scenario& scenario) {
  if (!validate_certified(plan, certified)) {
    fail(ErrorCode::kPrecondition, "query " + plan.query_id + " is not certified");
  }
  SignedQuery out;
  out.query_id = plan.query_id;
  out.canonical = plan.canonical;
  const Bytes msg = query_signing_message(plan.canonical);
  const Bytes forged = query_signing_message(plan.canonical + "\n-- forged");
  for (std::uint32_t s = 0; s < keys.size(); ++s) {
    if (scenario.server_flag("withhold-signature", s)) continue;
    const Bytes& m = scenario.server_flag("forge-signature", s) ? forged : msg;
    QuerySignature sig{s, {}};
    crypto_sign_detached(sig.sig.data(), nullptr, m.data(), m.size(), keys[s].sk.data());
    out.signatures.push_back(sig);
  }
  return out;
}

std::size_t valid_signatures(const SignedQuery& q, std::span<const SigningPublic> server_keys) {
  const Bytes msg = query_signing_message(q.canonical);
  std::set<std::uint32_t> valid;
  for (const QuerySignature& s : q.signatures) {
    if (s.server >= server_keys.size()) continue;
    if (crypto_sign_verify_detached(s.sig.data(), msg.data(), msg.size(),
                                    server_keys[s.server].data()) == 0) {
      valid.insert(s.server);
    }
  }
  return valid.size();
}

std::size_t signature_threshold(std::size_t servers, double malicious_fraction) {
  require(malicious_fraction >= 0.0 && malicious_fraction < 0.5, ErrorCode::kInvalidArgument,
          "malicious fraction must lie in [0, 0.5)");
  double compromisable = std::floor(malicious_fraction * static_cast<double>(servers) + 1e-9);
  return static_cast<std::size_t>(compromisable) + 1;
}

bool device_accepts(const SignedQuery& q, std::span<const SigningPublic> server_keys,
                    double malicious_fraction) {
  return valid_signatures(q, server_keys) >=
         signature_threshold(server_keys.size(), malicious_fraction);
}

}  // namespace colo
