#include <gtest/gtest.h>

#include <random>

#include "hotspot/error.hpp"
#include "hotspot/simulator.hpp"
#include "random_scenarios.hpp"
#include "test_support.hpp"

using namespace hotspot;
using namespace hotspot::literals;
using hotspot::testing::random_scenario;
using hotspot::testing::single_client_scenario;
using hotspot::testing::summed_energy;
using hotspot::testing::two_state_model;

namespace {

Burst wlan_burst(Micros start, Micros end) {
  return Burst{"c1", InterfaceKind::wlan(), start, end, 1'000, 1, end};
}

const InterfaceKey kC1Wlan{"c1", InterfaceKind::wlan()};

}  // namespace

TEST(Run, EmptyScenario) {
  Scenario sc;
  sc.horizon = 10_s;
  sc.capacity = mbps(6);
  const RunResult r = run(sc);
  EXPECT_TRUE(r.scheduled.schedule.empty());
  EXPECT_EQ(r.energy.total(), 0_mJ);
  EXPECT_EQ(r.qos.violation_count(), 0u);
  EXPECT_TRUE(r.timelines.empty());
}

TEST(Run, SingleClientClosedForm) {
  const RunResult r = run(single_client_scenario(100_s, 64'000));
  // 25 bursts of 64 000 B at 5 Mbps.
  EXPECT_EQ(r.scheduled.schedule.bursts().size(), 25u);
  const auto& e = r.energy.entries.at(kC1Wlan);
  EXPECT_EQ(e.time_in_state.at("active"), 2'560_ms);
  EXPECT_EQ(e.energy, 2'560_mJ);
  EXPECT_EQ(r.energy.total(), 2'560_mJ);
  EXPECT_EQ(EnergyReport::average_power_micro_mw(r.energy.total(), 100_s), 25'600'000);
  EXPECT_EQ(r.qos.violation_count(), 0u);
}

TEST(Run, Deterministic) {
  const Scenario sc = single_client_scenario(100_s, 64'000);
  const RunResult a = run(sc);
  const RunResult b = run(sc);
  EXPECT_EQ(a.scheduled.schedule, b.scheduled.schedule);
  EXPECT_EQ(a.energy.total(), b.energy.total());
}

TEST(Run, RejectsInvalidScenario) {
  Scenario sc = single_client_scenario(100_s, 64'000);
  sc.streams[0].client = "ghost";
  EXPECT_THROW(run(sc), ValidationError);
}

TEST(Run, AdmissionRejectionIsReported) {
  Scenario sc = single_client_scenario(10_s, 64'000);
  sc.capacity = kbps(100);
  const RunResult r = run(sc);
  ASSERT_EQ(r.qos.rejected.size(), 1u);
  EXPECT_EQ(r.qos.rejected[0], "c1");
  EXPECT_GT(r.qos.violation_count(), 0u);
}

TEST(RunBaseline, Examples) {
  const Scenario one = single_client_scenario(100_s, 64'000);
  const EnergyReport b = run_baseline(one);
  EXPECT_EQ(b.total(), 100'000_mJ);
  EXPECT_EQ(EnergyReport::average_power_micro_mw(b.total(), 100_s), 1'000'000'000);

  Scenario three = one;
  for (const ClientId id : {"c2", "c3"}) {
    three.clients.push_back(ClientConfig{id, {"wlan"}, kRatioOne});
    StreamSpec s = three.streams[0];
    s.client = id;
    three.streams.push_back(s);
    LinkTrace tr = three.links[0];
    tr.client = id;
    three.links.push_back(tr);
  }
  EXPECT_EQ(run_baseline(three).total(), b.total() * 3);

  Scenario empty;
  empty.capacity = mbps(6);
  empty.horizon = 0_us;
  EXPECT_EQ(run_baseline(empty).total(), 0_mJ);
}

TEST(Compare, Examples) {
  const Savings typical{2'560_mJ, 100'000_mJ};
  EXPECT_TRUE(typical.defined());
  EXPECT_EQ(typical.fraction_ppm(), 974'400);
  EXPECT_DOUBLE_EQ(typical.fraction(), 0.9744);

  EXPECT_EQ((Savings{5_mJ, 5_mJ}.fraction_ppm()), 0);
  EXPECT_EQ((Savings{0_mJ, 5_mJ}.fraction_ppm()), 1'000'000);

  const Savings undefined{5_mJ, 0_mJ};
  EXPECT_FALSE(undefined.defined());
  EXPECT_THROW(undefined.fraction_ppm(), ValidationError);
}

TEST(Compare, EndToEnd) {
  const Scenario sc = single_client_scenario(100_s, 64'000);
  const Comparison c = compare(run(sc).energy, run_baseline(sc));
  EXPECT_EQ(c.total.scheduled, 2'560_mJ);
  EXPECT_EQ(c.total.baseline, 100'000_mJ);
  EXPECT_EQ(c.total.fraction_ppm(), 974'400);
  EXPECT_EQ(c.per_client.at("c1").fraction_ppm(), 974'400);
}

TEST(Compare, MismatchedReportsThrow) {
  EnergyReport a;
  a.entries[kC1Wlan] = {};
  EXPECT_THROW(compare(a, EnergyReport{}), ValidationError);
}

TEST(BuildTimeline, WakeEndsAtBurstStartAndClips) {
  const WnicModel m = two_state_model(InterfaceKind::wlan(), 1000_mW, 5_mW, mbps(5), {300_ms, 150_mJ},
                                      {10_ms, 1_mJ});
  const InterfaceTimeline tl = build_timeline(m, {wlan_burst(10_s, 12_s), wlan_burst(20_s, 22_s)}, 21_s);
  check_coverage(tl.states, 21_s);
  const StateTimeline expected{{0_us, 9'700_ms, "off", {}},  {9'700_ms, 10_s, "active", "off"},
                               {10_s, 12_s, "active", {}},   {12_s, 12'010_ms, "off", "active"},
                               {12'010_ms, 19'700_ms, "off", {}}, {19'700_ms, 20_s, "active", "off"},
                               {20_s, 21_s, "active", {}}};
  EXPECT_EQ(tl.states, expected);
  // The sleep transition after the clipped burst falls outside the horizon.
  ASSERT_EQ(tl.transitions.size(), 3u);
  EXPECT_EQ(tl.transitions[2], (TransitionEvent{19'700_ms, "off", "active"}));
}

TEST(BuildTimeline, ShortGapsStayActive) {
  const WnicModel m = two_state_model(InterfaceKind::wlan(), 1000_mW, 5_mW, mbps(5), {300_ms, 150_mJ},
                                      {10_ms, 1_mJ});
  const InterfaceTimeline tl = build_timeline(m, {wlan_burst(1_s, 2_s), wlan_burst(2_s + 310_ms, 3_s)}, 5_s);
  const StateTimeline expected{{0_us, 700_ms, "off", {}}, {700_ms, 1_s, "active", "off"},
                               {1_s, 3_s, "active", {}}, {3_s, 3'010_ms, "off", "active"},
                               {3'010_ms, 5_s, "off", {}}};
  EXPECT_EQ(tl.states, expected);
  EXPECT_EQ(tl.transitions.size(), 2u);
}

TEST(BuildTimeline, WakeBeforeZeroThrows) {
  const WnicModel m = two_state_model(InterfaceKind::wlan(), 1000_mW, 5_mW, mbps(5), {300_ms, 150_mJ});
  EXPECT_THROW(build_timeline(m, {wlan_burst(100_ms, 200_ms)}, 1_s), ValidationError);
}

TEST(PowerTrace, InstantTransitions) {
  const WnicModel m = two_state_model(InterfaceKind::wlan(), 1000_mW, 30_mW, mbps(5));
  std::map<InterfaceKey, InterfaceTimeline> tls{
      {kC1Wlan, build_timeline(m, {wlan_burst(10_s, 12_s), wlan_burst(20_s, 22_s)}, 30_s)}};
  const auto samples = power_trace(tls, {{kC1Wlan, m}});
  std::vector<std::pair<Micros, Milliwatts>> got;
  for (const auto& s : samples) got.emplace_back(s.time, s.power);
  const std::vector<std::pair<Micros, Milliwatts>> expected{
      {0_us, 30_mW}, {10_s, 1000_mW}, {12_s, 30_mW}, {20_s, 1000_mW}, {22_s, 30_mW}, {30_s, 30_mW}};
  EXPECT_EQ(got, expected);
}

TEST(PowerTrace, AllSleep) {
  const WnicModel m = two_state_model(InterfaceKind::wlan(), 1000_mW, 30_mW, mbps(5));
  std::map<InterfaceKey, InterfaceTimeline> tls{{kC1Wlan, build_timeline(m, {}, 30_s)}};
  const auto samples = power_trace(tls, {{kC1Wlan, m}});
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_EQ(samples[0].power, 30_mW);
  EXPECT_EQ(samples[1].power, 30_mW);
  EXPECT_EQ(samples[1].time, 30_s);
}

TEST(PowerTrace, WakeLatencyDrawnBeforeBurst) {
  const WnicModel m = two_state_model(InterfaceKind::wlan(), 1000_mW, 30_mW, mbps(5), {300_ms, 150_mJ});
  std::map<InterfaceKey, InterfaceTimeline> tls{{kC1Wlan, build_timeline(m, {wlan_burst(10_s, 12_s)}, 30_s)}};
  const auto samples = power_trace(tls, {{kC1Wlan, m}});
  ASSERT_GE(samples.size(), 2u);
  EXPECT_EQ(samples[1].time, 9'700_ms);
  EXPECT_EQ(samples[1].power, 1000_mW);
}

// ---- properties over random scenarios --------------------------------------

TEST(RunProperty, ConservationAndCoverage) {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 60; ++trial) {
    const Scenario sc = random_scenario(rng);
    const RunResult r = run(sc);
    const auto models = interface_models(sc);
    for (const auto& [key, tl] : r.timelines) {
      check_coverage(tl.states, sc.horizon);
      Micros sum{0};
      for (const auto& [state, t] : r.energy.entries.at(key).time_in_state) sum += t;
      EXPECT_EQ(sum, sc.horizon);
      EXPECT_EQ(summed_energy(models.at(key), tl), r.energy.entries.at(key).energy)
          << "trial " << trial << " " << key.first << "/" << key.second.label();
    }
    const EnergyReport base = run_baseline(sc);
    for (const auto& [key, e] : base.entries) {
      EXPECT_EQ(e.energy, models.at(key).power_of(models.at(key).idle_state) * sc.horizon);
    }
  }
}

TEST(RunProperty, InterfaceActiveDuringEveryBurst) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const Scenario sc = random_scenario(rng);
    const RunResult r = run(sc);
    const auto models = interface_models(sc);
    for (const auto& b : r.scheduled.schedule.bursts()) {
      const InterfaceKey key{b.client, b.interface};
      const std::string& active = models.at(key).active_state().name;
      for (const auto& iv : r.timelines.at(key).states) {
        if (iv.end <= b.start || iv.start >= std::min(b.end, sc.horizon)) continue;
        EXPECT_FALSE(iv.is_transition()) << "trial " << trial;
        EXPECT_EQ(iv.state, active) << "trial " << trial;
      }
    }
  }
}

TEST(RunProperty, ScheduleValidity) {
  std::mt19937_64 rng(8080);
  for (int trial = 0; trial < 60; ++trial) {
    const Scenario sc = random_scenario(rng);
    const RunResult r = run(sc);
    std::map<InterfaceKind, Micros> medium_free;
    for (const auto& b : r.scheduled.schedule.bursts()) {
      // No overlap per medium (bursts are sorted by start).
      EXPECT_LE(medium_free[b.interface], b.start);
      medium_free[b.interface] = std::max(medium_free[b.interface], b.end);
      // The burst never outruns the link: its bits fit the trace's capacity.
      for (const auto& link : sc.links) {
        if (link.client != b.client || link.interface != b.interface) continue;
        EXPECT_TRUE(static_cast<__int128>(b.bytes) * 8'000'000 <= capacity_scaled(link, b.start, b.end));
      }
    }
  }
}

TEST(RunProperty, OnTimeSchedulesHaveNoUnderflow) {
  std::mt19937_64 rng(999);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const Scenario sc = random_scenario(rng);
    const RunResult r = run(sc);
    if (!r.qos.misses.empty() || !r.qos.failures.empty() || !r.qos.rejected.empty()) continue;
    ++checked;
    EXPECT_TRUE(r.qos.underflows.empty()) << "trial " << trial;
  }
  EXPECT_GT(checked, 0);
}

TEST(RunProperty, BaselineDominanceWhenGapsPayForTransitions) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const Scenario sc = random_scenario(rng);
    const RunResult r = run(sc);
    const EnergyReport base = run_baseline(sc);
    const auto models = interface_models(sc);
    for (const auto& client : sc.clients) {
      bool condition = true;
      for (const auto& [key, m] : models) {
        if (key.first != client.id) continue;
        const auto idle = m.power_of(m.idle_state);
        const auto sleep = m.power_of(m.sleep_state);
        const auto& active = m.active_state().name;
        const Nanojoules cycle = transition_cost(m, m.sleep_state, active).energy +
                                 transition_cost(m, active, m.sleep_state).energy;
        Micros prev_end{0};
        for (const auto& b : r.scheduled.schedule.for_client(client.id)) {
          if (b.interface != key.second) continue;
          const Micros gap = b.start - prev_end;
          if (gap > 0_us && !((idle - sleep) * gap > cycle)) condition = false;
          prev_end = b.end;
        }
      }
      if (!condition) continue;
      EXPECT_LE(r.energy.client_total(client.id), base.client_total(client.id)) << "trial " << trial;
    }
  }
}

TEST(RunProperty, BurstSizeMonotonicity) {
  Nanojoules previous{std::numeric_limits<std::int64_t>::max()};
  for (std::int64_t kb : {16, 32, 64, 128}) {
    Scenario sc = single_client_scenario(100_s, kb * 1'000, 1000_mW, 30_mW);
    sc.horizon = 103_s;  // whole playout, including the startup allowance
    const RunResult r = run(sc);
    EXPECT_EQ(r.qos.violation_count(), 0u) << kb;
    EXPECT_LE(r.energy.total(), previous) << kb;
    previous = r.energy.total();
  }
}

TEST(RunProperty, BurstSizeStrictlyHelpsWithCostlyWakeUps) {
  Nanojoules previous{std::numeric_limits<std::int64_t>::max()};
  for (std::int64_t kb : {16, 32, 64, 128}) {
    Scenario sc = single_client_scenario(100_s, kb * 1'000, 1000_mW, 30_mW);
    sc.horizon = 103_s;
    sc.models.at("wlan").transitions[{"off", "active"}] = {2_ms, 1_mJ};
    const RunResult r = run(sc);
    EXPECT_LT(r.energy.total(), previous) << kb;
    previous = r.energy.total();
  }
}
