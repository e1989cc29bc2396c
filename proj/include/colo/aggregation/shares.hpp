#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "colo/core/prg.hpp"
#include "colo/core/ring.hpp"

namespace colo {

// M-1 uniform shares and one balancing share; the shares sum to y.
// Throws kInvalidArgument when M < 2.
std::vector<RingElement> share(RingElement y, std::size_t servers, Prg& prg);

// One device's upload to one server: a share of each leaf accumulator.
struct ShareUpload {
  std::uint32_t device = 0;
  std::uint32_t server = 0;
  std::vector<RingElement> values;
};

// Shares of a vector of accumulators, grouped per server.
std::vector<ShareUpload> share_result(std::uint32_t device, std::span<const RingElement> result,
                                      std::size_t servers, Prg& prg);

struct ServerTally {
  std::uint32_t server = 0;
  std::vector<RingElement> sums;
  std::uint64_t devices = 0;
};

// Sum of the uploads addressed to this server. Throws kInvalidArgument on an
// upload for another server or of the wrong width.
ServerTally tally(std::uint32_t server, std::size_t width, std::span<const ShareUpload> uploads);

// Per-leaf sum over one tally per server. Throws kProtocolAbort when a
// server's tally is missing or duplicated.
std::vector<RingElement> reconstruct(std::span<const ServerTally> tallies, std::size_t servers);

}  // namespace colo
