#include <algorithm>
#include <limits>

#include "hotspot/error.hpp"
#include "hotspot/scheduler.hpp"

namespace hotspot {

double wfq_finish_tag(WfqFlowState& flow, double virtual_now, std::int64_t bytes,
                      BitRate total_rate) {
  if (total_rate <= BitRate{0}) throw ValidationError("WFQ total rate must be positive");
  if (flow.weight <= 0.0) throw ValidationError("WFQ weight must be positive");
  const double service = static_cast<double>(bytes) * 8.0 /
                         (flow.weight * static_cast<double>(total_rate.count()));
  flow.last_finish = std::max(virtual_now, flow.last_finish) + service;
  return flow.last_finish;
}

void GpsVirtualClock::advance(Micros t) {
  const double target_s = static_cast<double>(t.count()) / 1e6;
  if (target_s < real_now_s_) throw ValidationError("GPS clock cannot run backwards");
  while (!backlog_.empty()) {
    double earliest = std::numeric_limits<double>::infinity();
    for (const auto& [flow, entry] : backlog_) earliest = std::min(earliest, entry.last_finish);

    // Real seconds until the reference system finishes the earliest flow.
    const double needed_s = (earliest - virtual_now_) * weight_sum_;
    const double available_s = std::max(0.0, target_s - real_now_s_);
    if (needed_s > available_s) {
      virtual_now_ += available_s / weight_sum_;
      real_now_s_ = target_s;
      return;
    }
    real_now_s_ += needed_s;
    virtual_now_ = earliest;
    for (auto it = backlog_.begin(); it != backlog_.end();) {
      if (it->second.last_finish <= earliest) {
        weight_sum_ -= it->second.weight;
        it = backlog_.erase(it);
      } else {
        ++it;
      }
    }
    if (backlog_.empty()) weight_sum_ = 0.0;
  }
  real_now_s_ = target_s;
}

void GpsVirtualClock::on_arrival(const ClientId& flow, double weight, double finish_tag) {
  auto [it, inserted] = backlog_.try_emplace(flow, FlowEntry{weight, finish_tag});
  if (inserted) {
    weight_sum_ += weight;
  } else {
    it->second.last_finish = std::max(it->second.last_finish, finish_tag);
  }
}

}  // namespace hotspot
