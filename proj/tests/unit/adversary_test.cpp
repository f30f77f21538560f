// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "sfsec/adversary/attacks.hpp"
#include "sfsec/adversary/scenario.hpp"

namespace sfsec::adversary {
namespace {

using protocol::SecurityMode;

AttackScenario scenario(AttackKind kind, SecurityMode sec) {
  AttackScenario s;
  s.name = "t";
  s.kind = kind;
  s.security = sec;
  s.attempts = 2000;
  return s;
}

TEST(Bound, MatchesBinomial) {
  EXPECT_NEAR(forgery_bound(100'000), 2.3283e-5, 1e-8);
  EXPECT_EQ(forgery_bound(0), 0.0);
}

TEST(Eavesdrop, EncryptedHidesPayload) {
  const auto v = run_eavesdrop(scenario(AttackKind::kEavesdrop, SecurityMode::kOn));
  EXPECT_FALSE(v.succeeded);
  EXPECT_GT(v.evidence.frames_captured, 0u);
  EXPECT_FALSE(v.evidence.ind_readable);
}

TEST(Eavesdrop, LeakedKeyReadsIndAndData) {
  auto s = scenario(AttackKind::kEavesdrop, SecurityMode::kOn);
  s.caps.knows_network_key = true;
  const auto v = run_eavesdrop(s);
  EXPECT_TRUE(v.succeeded);
  EXPECT_TRUE(v.evidence.ind_readable);
}

TEST(Eavesdrop, DeviceKeysHideInnerPayloadFromNetworkKeyHolder) {
  auto s = scenario(AttackKind::kEavesdrop, SecurityMode::kOnDeviceKeys);
  s.caps.knows_network_key = true;
  EXPECT_FALSE(run_eavesdrop(s).succeeded);
}

TEST(Eavesdrop, PlainNetworkReadable) {
  const auto v = run_eavesdrop(scenario(AttackKind::kEavesdrop, SecurityMode::kOff));
  EXPECT_TRUE(v.succeeded);
  EXPECT_TRUE(v.evidence.ind_readable);
  EXPECT_FALSE(v.evidence.recovered_plaintext.empty());
}

TEST(Inject, EncryptedRejectsForgeries) {
  const auto v = run_inject(scenario(AttackKind::kInject, SecurityMode::kOn));
  EXPECT_FALSE(v.succeeded);
  EXPECT_EQ(v.evidence.attempts, 2000u);
  EXPECT_GT(v.evidence.attempts_received, 1900u);
  EXPECT_EQ(v.evidence.accepted_forgeries, 0u);
  EXPECT_EQ(v.evidence.forged_ind_joins, 0u);
}

TEST(Inject, PlainAcceptsForgeries) {
  const auto v = run_inject(scenario(AttackKind::kInject, SecurityMode::kOff));
  EXPECT_TRUE(v.succeeded);
  EXPECT_GT(v.evidence.accepted_forgeries, 0u);
  EXPECT_EQ(v.evidence.forged_ind_joins, 1u);
}

TEST(Inject, NoWorseThanJamming) {
  const auto forged = run_inject(scenario(AttackKind::kInject, SecurityMode::kOn));
  const auto jam = run_jam(scenario(AttackKind::kJam, SecurityMode::kOn));
  EXPECT_LE(forged.evidence.victim_desyncs, jam.evidence.victim_desyncs);
  EXPECT_LE(forged.evidence.victim_per, jam.evidence.victim_per + 1e-12);
}

TEST(Replay, CrossEpochRejected) {
  const auto v = run_replay(scenario(AttackKind::kReplay, SecurityMode::kOn));
  EXPECT_FALSE(v.succeeded);
  EXPECT_GT(v.evidence.replays_sent, 0u);
  EXPECT_EQ(v.evidence.replayed_accepts, 0u);
}

TEST(Replay, PostRestartRejected) {
  auto s = scenario(AttackKind::kReplay, SecurityMode::kOn);
  s.replay = ReplayMode::kPostRestart;
  const auto v = run_replay(s);
  EXPECT_FALSE(v.succeeded);
  EXPECT_GT(v.evidence.replays_sent, 0u);
  EXPECT_GT(v.evidence.ind_replays_rejected, 0u);
  EXPECT_EQ(v.evidence.ledger_violations, 0u);
}

TEST(Replay, SameSlotIsCtParticipation) {
  auto s = scenario(AttackKind::kReplay, SecurityMode::kOn);
  s.replay = ReplayMode::kSameSlot;
  const auto v = run_replay(s);
  EXPECT_FALSE(v.succeeded);
  EXPECT_GT(v.evidence.replays_sent, 0u);
  EXPECT_EQ(v.evidence.victim_deliveries, v.evidence.victim_floods);
}

TEST(Replay, PlainAccepted) {
  EXPECT_TRUE(run_replay(scenario(AttackKind::kReplay, SecurityMode::kOff)).succeeded);
}

TEST(ManyTimePad, SharedNonceLeaksXor) {
  const auto v = run_many_time_pad(scenario(AttackKind::kManyTimePad, SecurityMode::kOn));
  EXPECT_TRUE(v.succeeded);
  EXPECT_TRUE(v.evidence.xor_match);
  EXPECT_TRUE(v.evidence.inner_xor_match);
  EXPECT_GT(v.evidence.ledger_mp2p_reuse, 0u);
  EXPECT_GT(v.evidence.ledger_confidentiality_losses, 0u);
  EXPECT_EQ(v.evidence.ledger_violations, 0u);
}

TEST(ManyTimePad, DeviceKeysProtectInnerLayer) {
  const auto v = run_many_time_pad(scenario(AttackKind::kManyTimePad, SecurityMode::kOnDeviceKeys));
  EXPECT_FALSE(v.succeeded);
  EXPECT_TRUE(v.evidence.xor_match);
  EXPECT_FALSE(v.evidence.inner_xor_match);
  EXPECT_GT(v.evidence.ledger_mp2p_reuse, 0u);
  EXPECT_EQ(v.evidence.ledger_confidentiality_losses, 0u);
}

TEST(ManyTimePad, PlainSucceeds) {
  EXPECT_TRUE(run_many_time_pad(scenario(AttackKind::kManyTimePad, SecurityMode::kOff)).succeeded);
}

TEST(Scenario, ParsesFileFormat) {
  const auto s = parse_scenarios(R"({"scenarios": [
    {"name": "a", "kind": "replay", "security": "on", "replay": "post_restart", "expect": {"succeeded": false}},
    {"name": "b", "kind": "inject", "security": "off", "attempts": 10,
     "capabilities": {"knows_network_key": false, "can_record": true}}]})");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].replay, ReplayMode::kPostRestart);
  EXPECT_EQ(s[0].expect_success, false);
  EXPECT_EQ(s[1].attempts, 10u);
  EXPECT_FALSE(s[1].expect_success.has_value());
}

TEST(Scenario, RejectsBadInput) {
  EXPECT_THROW(parse_scenarios("{"), ScenarioError);
  EXPECT_THROW(parse_scenarios(R"({"kind": "teleport"})"), ScenarioError);
  EXPECT_THROW(parse_scenarios(R"({"kind": "inject", "colour": 1})"), ScenarioError);
}

TEST(Scenario, MismatchDetected) {
  auto s = scenario(AttackKind::kEavesdrop, SecurityMode::kOn);
  s.expect_success = true;
  const auto out = run_scenarios({s});
  EXPECT_FALSE(out.front().matches);
}

}  // namespace
}  // namespace sfsec::adversary
