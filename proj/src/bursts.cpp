#include <algorithm>

#include "hotspot/error.hpp"
#include "hotspot/scheduler.hpp"

namespace hotspot {

std::vector<std::string> validate_stream(const StreamSpec& stream) {
  std::vector<std::string> violations;
  const std::string where = "stream " + stream.client;
  if (stream.bitrate <= BitRate{0}) violations.push_back(where + ": bitrate must be positive");
  if (stream.prebuffer <= 0) violations.push_back(where + ": prebuffer must be positive");
  if (stream.prebuffer > stream.buffer_capacity) {
    violations.push_back(where + ": prebuffer exceeds buffer_capacity");
  }
  if (stream.start < Micros{0}) violations.push_back(where + ": negative start");
  if (stream.duration < Micros{0}) violations.push_back(where + ": negative duration");
  if (stream.max_startup_latency <= Micros{0}) {
    violations.push_back(where + ": max_startup_latency must be positive");
  }
  return violations;
}

std::int64_t stream_total_bytes(const StreamSpec& stream) {
  return ceil_div(static_cast<__int128>(stream.bitrate.count()) * stream.duration.count(),
                  8'000'000);
}

std::int64_t default_burst_bytes(const StreamSpec& stream) {
  return std::min<std::int64_t>(stream.buffer_capacity / 2, 64'000);
}

std::vector<BurstRequest> derive_bursts(const StreamSpec& stream, std::int64_t burst_bytes) {
  if (burst_bytes <= 0) throw ValidationError("burst size must be positive");
  if (burst_bytes > stream.buffer_capacity) {
    throw ValidationError("burst size " + std::to_string(burst_bytes) +
                          " exceeds buffer capacity " + std::to_string(stream.buffer_capacity));
  }
  if (stream.max_startup_latency <= Micros{0}) {
    throw ValidationError("max_startup_latency must be positive");
  }
  if (stream.bitrate <= BitRate{0}) throw ValidationError("bitrate must be positive");

  std::vector<BurstRequest> out;
  const std::int64_t total = stream_total_bytes(stream);
  if (total == 0) return out;

  const std::int64_t prebuffer = std::min(stream.prebuffer, total);
  const std::int64_t first = std::min(total, std::max(burst_bytes, prebuffer));
  const Micros playback_start = stream.start + stream.max_startup_latency;

  out.push_back(BurstRequest{stream.client, first, stream.start, playback_start, stream.bitrate, 1});
  std::int64_t delivered = first;
  while (delivered < total) {
    const BurstRequest& prev = out.back();
    // Instant the already-promised bytes are used up, counted from the
    // worst-case playback start. Floor keeps the deadline at or before it.
    const Micros dry{static_cast<std::int64_t>(static_cast<__int128>(delivered) * 8'000'000 /
                                               stream.bitrate.count())};
    const Micros deadline = std::max(playback_start + dry, prev.deadline + Micros{1});
    const std::int64_t bytes = std::min(burst_bytes, total - delivered);
    out.push_back(BurstRequest{stream.client, bytes, prev.deadline, deadline, stream.bitrate,
                               prev.sequence + 1});
    delivered += bytes;
  }
  return out;
}

bool admit_client(BitRate server_load, BitRate capacity, const StreamSpec& stream) {
  if (capacity <= BitRate{0}) throw ValidationError("server capacity must be positive");
  return server_load + stream.bitrate <= capacity;
}

}  // namespace hotspot
