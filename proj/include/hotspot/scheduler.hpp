#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hotspot/link_model.hpp"
#include "hotspot/power_model.hpp"
#include "hotspot/units.hpp"

namespace hotspot {

/// A constant-bitrate stream delivered to one client.
struct StreamSpec {
  ClientId client;
  BitRate bitrate;
  Micros start;
  Micros duration;
  std::int64_t prebuffer = 0;
  std::int64_t buffer_capacity = 0;
  Micros max_startup_latency;

  bool operator==(const StreamSpec&) const = default;
};

std::vector<std::string> validate_stream(const StreamSpec& stream);

/// ceil(bitrate * duration / 8) bytes.
std::int64_t stream_total_bytes(const StreamSpec& stream);

/// min(buffer_capacity / 2, 64 000).
std::int64_t default_burst_bytes(const StreamSpec& stream);

struct BurstRequest {
  ClientId client;
  std::int64_t bytes = 0;
  Micros release;
  Micros deadline;
  /// Rate the carrying interface must sustain (the stream bitrate).
  BitRate required;
  /// 1-based position within the client's stream.
  int sequence = 0;

  bool operator==(const BurstRequest&) const = default;
};

/// Splits a stream into burst requests.
///
/// The first burst carries at least the prebuffer and is due at
/// start + max_startup_latency; playback is assumed to begin at that
/// deadline. Every later burst is due at the instant the client buffer would
/// run dry if all earlier bursts arrived exactly at their deadlines, and is
/// released at its predecessor's deadline. Meeting every deadline therefore
/// guarantees an underrun-free playout.
std::vector<BurstRequest> derive_bursts(const StreamSpec& stream, std::int64_t burst_bytes);

/// Admission control: admit iff load + stream bitrate fits in capacity.
bool admit_client(BitRate server_load, BitRate capacity, const StreamSpec& stream);

struct Burst {
  ClientId client;
  InterfaceKind interface = InterfaceKind::wlan();
  Micros start;
  Micros end;
  std::int64_t bytes = 0;
  int sequence = 0;
  Micros deadline;

  bool operator==(const Burst&) const = default;
};

/// Bursts ordered by (start, client), with a per-medium index. A medium is an
/// interface kind: two bursts on the same kind never overlap.
class Schedule {
 public:
  /// Throws ValidationError if the burst overlaps another on its medium.
  void add(Burst burst);

  const std::vector<Burst>& bursts() const { return bursts_; }
  std::vector<Burst> on_medium(const InterfaceKind& kind) const;
  std::vector<Burst> for_client(const ClientId& client) const;
  bool empty() const { return bursts_.empty(); }

  bool operator==(const Schedule&) const = default;

 private:
  std::vector<Burst> bursts_;
  std::map<InterfaceKind, std::vector<std::pair<Micros, Micros>>> occupancy_;
};

struct DeadlineMiss {
  ClientId client;
  int sequence = 0;
  Micros deadline;
  Micros end;

  bool operator==(const DeadlineMiss&) const = default;
};

struct BurstFailure {
  ClientId client;
  int sequence = 0;
  Micros time;
  std::string reason;

  bool operator==(const BurstFailure&) const = default;
};

struct InterfaceSwitch {
  ClientId client;
  Micros time;
  InterfaceKind from = InterfaceKind::wlan();
  InterfaceKind to = InterfaceKind::wlan();

  bool operator==(const InterfaceSwitch&) const = default;
};

struct ScheduleResult {
  Schedule schedule;
  std::vector<DeadlineMiss> misses;
  std::vector<BurstFailure> failures;
  std::vector<InterfaceSwitch> switches;
};

/// What the dispatcher needs to know about one client's radios.
struct ClientRadios {
  std::map<InterfaceKind, WnicModel> models;
  InterfaceTraces traces;
};

struct SchedulingContext {
  std::map<ClientId, ClientRadios> clients;
  SelectionPolicy policy;
  /// Reference rate of the WFQ virtual clock.
  BitRate capacity;
};

/// Non-preemptive earliest-deadline-first dispatch. Whenever a medium is
/// free, the released request with the smallest (deadline, client, release)
/// whose selected interface is that medium starts. Late bursts are reported
/// as misses; requests with no viable interface by their deadline become
/// failures.
ScheduleResult schedule_edf(std::span<const BurstRequest> requests, const SchedulingContext& ctx);

/// Per-flow WFQ bookkeeping. Pending requests live in the dispatcher.
struct WfqFlowState {
  ClientId flow;
  double weight = 1.0;
  double last_finish = 0.0;
};

/// Finish tag max(virtual_now, last_finish) + bits / (weight * total_rate),
/// in virtual seconds. Updates flow.last_finish.
double wfq_finish_tag(WfqFlowState& flow, double virtual_now, std::int64_t bytes,
                      BitRate total_rate);

/// Virtual time of the GPS reference system: advances at 1 / (sum of weights
/// of GPS-backlogged flows) per real second, and stands still when the
/// reference system is empty.
class GpsVirtualClock {
 public:
  /// Moves the clock to real time t (monotone), retiring flows whose last
  /// finish tag has been reached.
  void advance(Micros t);
  /// Registers an arrival whose finish tag is `finish_tag` on `flow`.
  void on_arrival(const ClientId& flow, double weight, double finish_tag);
  double now() const { return virtual_now_; }
  std::size_t backlogged_flows() const { return backlog_.size(); }

 private:
  struct FlowEntry {
    double weight = 0.0;
    double last_finish = 0.0;
  };
  std::map<ClientId, FlowEntry> backlog_;
  double weight_sum_ = 0.0;
  double virtual_now_ = 0.0;
  double real_now_s_ = 0.0;
};

/// Non-preemptive WFQ at burst granularity: requests are tagged on release
/// and served in ascending (finish tag, client, release) order per medium.
/// Every client in `requests` needs a positive weight.
ScheduleResult schedule_wfq(std::span<const BurstRequest> requests,
                            const std::map<ClientId, Ratio>& weights, const SchedulingContext& ctx);

struct UnderflowEvent {
  ClientId client;
  Micros time;

  bool operator==(const UnderflowEvent&) const = default;
};

struct OverflowEvent {
  ClientId client;
  Micros time;
  /// Bytes above capacity, held back and topped up as playback drains.
  std::int64_t deferred_bytes = 0;

  bool operator==(const OverflowEvent&) const = default;
};

struct StartupRecord {
  ClientId client;
  /// Empty when playback never started.
  std::optional<Micros> latency;
  bool violated = false;

  bool operator==(const StartupRecord&) const = default;
};

struct QosVerdict {
  std::vector<UnderflowEvent> underflows;
  std::vector<StartupRecord> startup;
  std::vector<OverflowEvent> overflows;

  bool passed() const;
};

/// Replays every client buffer against the delivered bursts. Bytes count as
/// delivered at burst end. Playback starts once the prebuffer is in, but not
/// before start + max_startup_latency, and stalls on each underrun until the
/// next delivery.
QosVerdict check_feasibility(const Schedule& schedule, std::span<const StreamSpec> streams);

}  // namespace hotspot
