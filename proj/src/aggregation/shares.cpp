#include "colo/aggregation/shares.hpp"

#include <string>

#include "colo/core/error.hpp"

namespace colo {

std::vector<RingElement> share(RingElement y, std::size_t servers, Prg& prg) {
  require(servers >= 2, ErrorCode::kInvalidArgument, "sharing needs at least 2 servers");
  std::vector<RingElement> out(servers);
  RingElement acc;
  for (std::size_t i = 0; i + 1 < servers; ++i) {
    out[i] = RingElement(prg.next_u64());
    acc += out[i];
  }
  out.back() = y - acc;
  return out;
}

std::vector<ShareUpload> share_result(std::uint32_t device, std::span<const RingElement> result,
                                      std::size_t servers, Prg& prg) {
  std::vector<ShareUpload> out(servers);
  for (std::size_t s = 0; s < servers; ++s) {
    out[s].device = device;
    out[s].server = static_cast<std::uint32_t>(s);
    out[s].values.resize(result.size());
  }
  for (std::size_t leaf = 0; leaf < result.size(); ++leaf) {
    std::vector<RingElement> parts = share(result[leaf], servers, prg);
    for (std::size_t s = 0; s < servers; ++s) out[s].values[leaf] = parts[s];
  }
  return out;
}

ServerTally tally(std::uint32_t server, std::size_t width, std::span<const ShareUpload> uploads) {
  ServerTally t;
  t.server = server;
  t.sums.resize(width);
  for (const ShareUpload& u : uploads) {
    require(u.server == server, ErrorCode::kInvalidArgument, "upload for another server");
    require(u.values.size() == width, ErrorCode::kInvalidArgument, "upload width mismatch");
    for (std::size_t i = 0; i < width; ++i) t.sums[i] += u.values[i];
    ++t.devices;
  }
  return t;
}

std::vector<RingElement> reconstruct(std::span<const ServerTally> tallies, std::size_t servers) {
  std::vector<bool> seen(servers, false);
  std::size_t width = tallies.empty() ? 0 : tallies[0].sums.size();
  std::vector<RingElement> out(width);
  for (const ServerTally& t : tallies) {
    require(t.server < servers && !seen[t.server], ErrorCode::kProtocolAbort,
            "duplicate or unknown tally from server " + std::to_string(t.server));
    require(t.sums.size() == width, ErrorCode::kProtocolAbort, "tally width mismatch");
    seen[t.server] = true;
    for (std::size_t i = 0; i < width; ++i) out[i] += t.sums[i];
  }
  for (std::size_t s = 0; s < servers; ++s) {
    require(seen[s], ErrorCode::kProtocolAbort, "missing tally from server " + std::to_string(s));
  }
  return out;
}

}  // namespace colo
