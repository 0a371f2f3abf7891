#include <algorithm>

#include "hotspot/scheduler.hpp"

namespace hotspot {

namespace {

struct Delivery {
  Micros time;
  std::int64_t bytes;
};

// Byte quantities are carried as bits * 1e6 so that bitrate (bit/s) times a
// duration in microseconds lands on the same integer scale.
constexpr __int128 kScale = 8'000'000;

void replay_stream(const StreamSpec& stream, const std::vector<Delivery>& deliveries,
                   QosVerdict& verdict) {
  const std::int64_t total = stream_total_bytes(stream);
  if (total == 0) {
    verdict.startup.push_back({stream.client, Micros{0}, false});
    return;
  }
  const __int128 target = static_cast<__int128>(total) * kScale;
  const __int128 prebuffer = static_cast<__int128>(std::min(stream.prebuffer, total)) * kScale;
  const __int128 capacity = static_cast<__int128>(stream.buffer_capacity) * kScale;
  const __int128 rate = stream.bitrate.count();

  __int128 delivered = 0;
  __int128 consumed = 0;

  auto deliver = [&](const Delivery& d) {
    delivered += static_cast<__int128>(d.bytes) * kScale;
    const __int128 level = delivered - consumed;
    if (level > capacity) {
      verdict.overflows.push_back({stream.client, d.time, ceil_div(level - capacity, kScale)});
    }
  };

  std::size_t next = 0;
  while (next < deliveries.size() && delivered < prebuffer) deliver(deliveries[next++]);
  // Deliveries landing at the same instant as the prebuffer completes.
  while (next < deliveries.size() && next > 0 && deliveries[next].time == deliveries[next - 1].time) {
    deliver(deliveries[next++]);
  }
  if (delivered < prebuffer) {
    verdict.startup.push_back({stream.client, std::nullopt, true});
    return;
  }

  // The client holds playback until the agreed playout instant even when the
  // prebuffer lands early; burst deadlines are counted from that instant.
  Micros now = std::max(deliveries[next - 1].time, stream.start + stream.max_startup_latency);
  while (next < deliveries.size() && deliveries[next].time <= now) deliver(deliveries[next++]);
  const Micros latency = now - stream.start;
  verdict.startup.push_back({stream.client, latency, latency > stream.max_startup_latency});

  while (consumed < target) {
    const __int128 buffered = delivered - consumed;
    if (delivered >= target && buffered >= target - consumed) break;  // plays out
    if (next < deliveries.size()) {
      const Delivery& d = deliveries[next];
      const __int128 playable = rate * (d.time - now).count();
      if (playable <= buffered) {
        consumed += playable;
      } else {
        // Runs dry strictly before the delivery; playback stalls until it.
        const Micros dry_at = now + Micros{static_cast<std::int64_t>(buffered / rate)};
        verdict.underflows.push_back({stream.client, dry_at});
        consumed += buffered;
      }
      now = d.time;
      deliver(d);
      ++next;
    } else {
      const Micros dry_at = now + Micros{static_cast<std::int64_t>(buffered / rate)};
      verdict.underflows.push_back({stream.client, dry_at});
      break;
    }
  }
}

}  // namespace

bool QosVerdict::passed() const {
  return underflows.empty() &&
         std::none_of(startup.begin(), startup.end(), [](const auto& s) { return s.violated; });
}

QosVerdict check_feasibility(const Schedule& schedule, std::span<const StreamSpec> streams) {
  QosVerdict verdict;
  for (const auto& stream : streams) {
    std::vector<Delivery> deliveries;
    for (const auto& b : schedule.for_client(stream.client)) deliveries.push_back({b.end, b.bytes});
    std::stable_sort(deliveries.begin(), deliveries.end(),
                     [](const Delivery& a, const Delivery& b) { return a.time < b.time; });
    replay_stream(stream, deliveries, verdict);
  }
  return verdict;
}

}  // namespace hotspot
