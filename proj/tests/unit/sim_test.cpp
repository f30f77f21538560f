// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sfsec/protocol/sync.hpp"
#include "sfsec/sim/clock.hpp"
#include "sfsec/sim/engine.hpp"
#include "sfsec/sim/event_queue.hpp"
#include "sfsec/sim/reception.hpp"
#include "sfsec/sim/rng.hpp"
#include "sfsec/sim/timeline.hpp"

namespace sfsec::sim {
namespace {

using protocol::EpochSchedule;
using protocol::Pattern;
using protocol::PhaseSpec;
using protocol::SecurityMode;

// Nodes 1 km apart, neighbours joined by perfect links.
Topology chain(std::size_t n) {
  Topology t = Topology::line(n, 1000.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    t.add_override({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i + 1), std::nullopt, 1.0, true});
  return t;
}

SimConfig chain_config(std::size_t n, PhaseSpec data, std::uint64_t epochs = 10) {
  SimConfig c;
  c.topology = chain(n);
  c.schedule = EpochSchedule(500ms, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 8, 3}, {data});
  c.epochs = epochs;
  return c;
}

TEST(Clock, DriftAccumulates) {
  const auto c = ClockModel::from_ppm(20.0);
  EXPECT_EQ(c.accumulated(SimTime{25ms}), Duration{500});
  EXPECT_EQ(c.local(SimTime{25ms}).ns, 25'000'500);
}

TEST(Clock, ToTrueInvertsLocal) {
  for (std::int64_t ppb : {-17'000LL, 20'000LL}) {
    ClockModel c(ppb, Duration{123});
    for (std::int64_t t : {0LL, 1'000LL, 25'000'000LL, 3'000'000'000LL}) {
      const auto back = c.to_true(c.local(SimTime{t}));
      EXPECT_EQ(c.local(back), c.local(SimTime{t}));
      EXPECT_LE(back.count(), t);
      EXPECT_GE(back.count(), t - 1);
    }
  }
}

TEST(Clock, ResyncKeepsReading) {
  ClockModel c(20'000, Duration{0});
  const SimTime t{10ms};
  const auto before = c.local(t);
  c.resync(t);
  EXPECT_EQ(c.local(t), before);
  EXPECT_EQ(c.accumulated(t + Duration{25ms}), Duration{500});
}

TEST(Reception, IncoherentBeyondBound) {
  const std::vector<Candidate> c = {{SimTime{0}, 7, 1.0, 1}, {SimTime{600}, 7, 1.0, 2}};
  EXPECT_EQ(resolve_reception(c, {}, 1).result, RxResult::kCtIncoherent);
}

TEST(Reception, CoherentCopiesCombineProbabilities) {
  const std::vector<Candidate> c = {{SimTime{0}, 7, 0.9, 1}, {SimTime{400}, 7, 0.9, 2}};
  const std::vector<double> ps = {0.9, 0.9};
  EXPECT_NEAR(ct_success_probability(ps), 0.99, 1e-12);
  const int trials = 200'000;
  int ok = 0;
  for (int k = 0; k < trials; ++k) ok += resolve_reception(c, {}, mix64(k)).result == RxResult::kReceived;
  EXPECT_NEAR(static_cast<double>(ok) / trials, 0.99, 0.002);
}

TEST(Reception, DifferentFramesGarbleWithoutCapture) {
  const std::vector<Candidate> c = {{SimTime{0}, 7, 1.0, 1}, {SimTime{0}, 8, 1.0, 2}};
  EXPECT_EQ(resolve_reception(c, {}, 3).result, RxResult::kCollisionGarble);
  ReceptionParams capture{500ns, 0.1};
  const std::vector<Candidate> strong = {{SimTime{0}, 7, 1.0, 1}, {SimTime{0}, 8, 0.5, 2}};
  int won = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto o = resolve_reception(strong, capture, mix64(k));
    if (o.result == RxResult::kReceived) won += o.chosen == 0;
  }
  EXPECT_EQ(won, 1000);
}

TEST(Reception, NoCandidatesIsErased) {
  EXPECT_EQ(resolve_reception({}, {}, 1).result, RxResult::kErased);
}

TEST(Reception, BitErrorRateMatches) {
  Bytes frame(250, 0);
  std::uint64_t bits = 0;
  const int trials = 4000;
  for (int k = 0; k < trials; ++k) {
    std::fill(frame.begin(), frame.end(), 0);
    bits += apply_bit_errors(frame, 1e-3, mix64(k + 11));
  }
  EXPECT_NEAR(static_cast<double>(bits) / (trials * 2000.0), 1e-3, 5e-5);
}

TEST(Reception, FirstErrorByteAgreesWithApply) {
  for (int k = 0; k < 500; ++k) {
    Bytes frame(60, 0);
    const auto first = first_error_byte(1e-3, mix64(k), frame.size());
    apply_bit_errors(frame, 1e-3, mix64(k));
    std::size_t actual = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < frame.size(); ++i)
      if (frame[i]) {
        actual = i;
        break;
      }
    EXPECT_EQ(first, actual);
  }
}

TEST(EventQueue, OrdersByTimeThenKind) {
  EventQueue q;
  q.push({SimTime{10}, EventKind::kRxWindow, 1, 0, 0, 0});
  q.push({SimTime{10}, EventKind::kTxBegin, 2, 0, 0, 0});
  q.push({SimTime{5}, EventKind::kTxEnd, 3, 0, 0, 0});
  EXPECT_EQ(q.pop().node, 3);
  EXPECT_EQ(q.pop().kind, EventKind::kTxBegin);
  EXPECT_EQ(q.pop().kind, EventKind::kRxWindow);
  EXPECT_TRUE(q.empty());
}

TEST(Timeline, SixSlotPhase) {
  EpochSchedule s(500ms, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 6, 3}, {});
  const auto t = s.timings(framing::PhyTable::defaults().get(framing::PhyMode::k1Mbps), SecurityMode::kOn, {});
  const auto events = schedule_phase_timeline(t[0], SimTime{0}, 0, 3, crypto::ccm_latency(crypto::CcmMode::kHardware));
  int starts = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].kind == EventKind::kSlotStart) ++starts;
    if (i > 0) {
      EXPECT_LE(events[i - 1].time, events[i].time);
    }
  }
  EXPECT_EQ(starts, 6);
  EXPECT_EQ(events.size(), 6u + 3u * 3u);
}

TEST(Timeline, OverrunDetected) {
  EpochSchedule s(5ms, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 6, 3},
                  {PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 200, 30, 3}});
  EXPECT_THROW(s.timings(framing::PhyTable::defaults().get(framing::PhyMode::k125Kbps), SecurityMode::kOn, {}),
               protocol::EpochOverrun);
}

TEST(Sync, ReferenceTimeAgreesAcrossHops) {
  EpochSchedule s(500ms, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 6, 3}, {});
  const auto t = s.timings(framing::PhyTable::defaults().get(framing::PhyMode::k1Mbps), SecurityMode::kOn, {})[0];
  const LocalTime start{7'000'000};
  // B hears A's slot-0 frame, C hears B's slot-1 frame.
  const LocalTime b_end = start + t.airtime;
  const LocalTime c_end = start + t.hop * 1 + t.airtime;
  EXPECT_EQ(protocol::compute_reference_time(b_end, 0, t.hop, t.airtime), start);
  EXPECT_EQ(protocol::compute_reference_time(c_end, 1, t.hop, t.airtime), start);
}

TEST(Engine, LosslessChainDeliversEverything) {
  auto c = chain_config(5, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 40, 8, 3});
  c.drift_ppm_max = 20.0;
  const auto r = run_simulation(c);
  for (std::uint8_t id = 1; id < 5; ++id) {
    EXPECT_EQ(r.node(id).expected, 10u);
    EXPECT_EQ(r.node(id).per(), 0.0) << int(id);
    EXPECT_EQ(r.node(id).forged_deliveries, 0u);
  }
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GT(r.ind_reuse, 0u);
}

TEST(Engine, UnencryptedChainDeliversEverything) {
  auto c = chain_config(5, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 40, 8, 3});
  c.security = SecurityMode::kOff;
  const auto r = run_simulation(c);
  for (std::uint8_t id = 1; id < 5; ++id) EXPECT_EQ(r.node(id).per(), 0.0);
  EXPECT_EQ(r.ind_reuse, 0u);
}

TEST(Engine, PointToPointOnlyTargetDelivers) {
  auto c = chain_config(3, PhaseSpec{Pattern::kP2P, {0}, 1, 20, 8, 3});
  const auto r = run_simulation(c);
  EXPECT_EQ(r.node(1).expected, 10u);
  EXPECT_EQ(r.node(1).delivered, 10u);
  EXPECT_EQ(r.node(2).expected, 0u);
  EXPECT_TRUE(r.deliveries[2].empty());
  EXPECT_GT(r.node(1).transmissions, 0u);
}

TEST(Engine, EpochCountAtHalfSecond) {
  auto c = chain_config(2, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 8, 2, 2}, 6000);
  const auto r = run_simulation(c);
  EXPECT_EQ(r.node(1).expected, 6000u);
  EXPECT_EQ(r.node(0).final_ec, 5999u);
  EXPECT_EQ(r.node(1).final_ec, 5999u);
}

TEST(Engine, SameSeedSameResult) {
  auto c = chain_config(6, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 60, 8, 3}, 30);
  c.topology = Topology::line(6, 150.0);
  c.link.base_ber = 3e-4;
  c.drift_ppm_max = 20.0;
  const auto a = run_simulation(c);
  const auto b = run_simulation(c);
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    EXPECT_EQ(a.nodes[i].delivered, b.nodes[i].delivered);
    EXPECT_EQ(a.nodes[i].outcomes, b.nodes[i].outcomes);
  }
  EXPECT_EQ(a.delivered_matrix, b.delivered_matrix);
}

TEST(Engine, BitErrorsRaiseLoss) {
  double prev = -1.0;
  for (double ber : {0.0, 1e-4, 1e-3, 3e-3}) {
    auto c = chain_config(2, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 100, 1, 1}, 400);
    c.schedule = EpochSchedule(500ms, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 2, 2},
                               {PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 100, 1, 1}});
    c.link.base_ber = ber;
    const double per = run_simulation(c).node(1).per();
    EXPECT_GE(per, prev);
    prev = per;
  }
  EXPECT_GT(prev, 0.5);
}

TEST(Engine, LengthOverrunIsClassified) {
  auto c = chain_config(2, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 100, 1, 1}, 400);
  c.schedule = EpochSchedule(500ms, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 2, 2},
                             {PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 100, 1, 1}});
  c.link.base_ber = 2e-3;
  const auto r = run_simulation(c);
  const auto& s = r.node(1);
  EXPECT_GT(s.outcomes[static_cast<std::size_t>(RxResult::kLengthOverrun)], 0u);
  EXPECT_GT(s.outcomes[static_cast<std::size_t>(RxResult::kCrcFail)], 0u);
  // A corrupted length never shifts later phases or epochs.
  EXPECT_EQ(s.final_ec, 399u);
  EXPECT_TRUE(s.final_joined);
}

TEST(Engine, LateJoinerAdoptsNetworkEc) {
  auto c = chain_config(3, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 20, 8, 3}, 20);
  c.late_joins = {{2, 5}};
  const auto r = run_simulation(c);
  ASSERT_TRUE(r.node(2).join_epoch.has_value());
  EXPECT_GE(*r.node(2).join_epoch, 5u);
  EXPECT_LT(*r.node(2).join_epoch, 5u + 4u);
  EXPECT_EQ(r.node(2).final_ec, r.node(0).final_ec);
}

TEST(Engine, RestartWithoutPersistenceReusesNonces) {
  auto c = chain_config(3, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 20, 8, 3}, 20);
  c.restarts = {{0, 10, false, false}};
  EXPECT_GT(run_simulation(c).violations, 0u);
  c.restarts = {{0, 10, true, false}};
  const auto r = run_simulation(c);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.node(0).final_ec, 19u);
}

TEST(Engine, CorruptStoreFailsClosed) {
  auto c = chain_config(3, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 20, 8, 3}, 12);
  c.restarts = {{1, 4, true, true}};
  const auto r = run_simulation(c);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_FALSE(r.node(1).final_joined);
  // Node 2 sits behind the failed relay.
  EXPECT_LE(r.node(2).delivered, 4u);
}

TEST(Engine, EventLogIsNdjson) {
  auto c = chain_config(2, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 8, 2, 2}, 2);
  c.event_log = true;
  const auto r = run_simulation(c);
  ASSERT_FALSE(r.event_log.empty());
  for (const auto& line : r.event_log) {
    EXPECT_EQ(line.front(), '{');
    EXPECT_EQ(line.back(), '}');
  }
}

TEST(Engine, RejectsUnknownInitiator) {
  auto c = chain_config(2, PhaseSpec{Pattern::kP2MP, {7}, std::nullopt, 8, 2, 2}, 2);
  EXPECT_THROW(Engine{c}, std::invalid_argument);
}

}  // namespace
}  // namespace sfsec::sim
