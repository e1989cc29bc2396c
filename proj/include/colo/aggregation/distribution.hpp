#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "colo/core/bytes.hpp"
#include "colo/core/prg.hpp"
#include "colo/mixnet/scenario.hpp"
#include "colo/query/plan.hpp"

namespace colo {

using SigningPublic = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

// Ed25519 key of one server.
struct ServerSigningKey {
  SigningPublic pk{};
  std::array<std::uint8_t, 64> sk{};
};

ServerSigningKey signing_keypair(const Seed& seed);

struct QuerySignature {
  std::uint32_t server = 0;
  Signature sig{};
};

struct SignedQuery {
  std::string query_id;
  std::string canonical;
  std::vector<QuerySignature> signatures;
};

// The bytes every server signs: a domain tag and the canonical query text.
Bytes query_signing_message(std::string_view canonical);

// Every server signs a certified plan. Scripted servers withhold their
// signature (withhold-signature) or sign other bytes (forge-signature).
// Throws kPrecondition when the plan is not certified.
SignedQuery sign_and_broadcast(const QueryPlan& plan, std::span<const ServerSigningKey> keys,
                               std::span<const std::string> certified,
                               const Scenario& scenario = {});

// Distinct servers whose signature verifies over this query.
std::size_t valid_signatures(const SignedQuery& q, std::span<const SigningPublic> server_keys);
// Smallest count strictly above floor(f * M).
std::size_t signature_threshold(std::size_t servers, double malicious_fraction);
bool device_accepts(const SignedQuery& q, std::span<const SigningPublic> server_keys,
                    double malicious_fraction);

}  // namespace colo
