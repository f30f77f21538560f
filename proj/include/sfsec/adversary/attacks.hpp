// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfsec/framing/phy.hpp"
#include "sfsec/protocol/schedule.hpp"

namespace sfsec::adversary {

enum class AttackKind : std::uint8_t { kEavesdrop, kInject, kReplay, kManyTimePad, kJam };
std::string_view to_string(AttackKind k);
std::optional<AttackKind> parse_attack_kind(std::string_view name);

enum class ReplayMode : std::uint8_t {
  /// Record in one epoch, replay verbatim in later ones.
  kCrossEpoch,
  /// As kCrossEpoch, across a restart of the initiator and the victim.
  kPostRestart,
  /// Repeat an honest frame in its own slot, on its own channel, in lockstep.
  kSameSlot,
};
std::string_view to_string(ReplayMode m);
std::optional<ReplayMode> parse_replay_mode(std::string_view name);

struct Capabilities {
  bool knows_network_key = false;
  bool knows_device_key = false;
  bool can_record = true;
};

struct AttackScenario {
  std::string name;
  AttackKind kind = AttackKind::kEavesdrop;
  protocol::SecurityMode security = protocol::SecurityMode::kOn;
  Capabilities caps;
  /// Data phase under attack (1-based; 0 is the IND).
  std::uint16_t target_phase = 1;
  framing::PhyMode phy = framing::PhyMode::k1Mbps;
  std::uint64_t seed = 1;
  std::uint64_t epochs = 20;
  /// Forged frames to send (inject, jam).
  std::uint64_t attempts = 1000;
  ReplayMode replay = ReplayMode::kCrossEpoch;
  /// Expected outcome; checked by the scenario runner when present.
  std::optional<bool> expect_success;
};

struct Evidence {
  std::uint64_t frames_captured = 0;
  std::uint64_t frames_recovered = 0;
  /// Hex of the first plaintext the attacker recovered correctly.
  std::string recovered_plaintext;
  /// The attacker read the EC out of an IND.
  bool ind_readable = false;
  std::uint64_t attempts = 0;
  /// Receptions of forged frames by honest radios with the CRC intact. One
  /// broadcast can reach several radios.
  std::uint64_t attempts_received = 0;
  std::uint64_t accepted_forgeries = 0;
  std::uint64_t forged_ind_joins = 0;
  /// Probability of at least one accept under a 32-bit MIC.
  double forgery_bound = 0.0;
  std::uint64_t replays_sent = 0;
  std::uint64_t replayed_accepts = 0;
  std::uint64_t ind_replays_rejected = 0;
  std::uint64_t victim_deliveries = 0;
  std::uint64_t victim_floods = 0;
  /// Outer-ciphertext XOR equals the outer-plaintext XOR.
  bool xor_match = false;
  /// Same relation on the application payloads.
  bool inner_xor_match = false;
  std::uint64_t ledger_mp2p_reuse = 0;
  std::uint64_t ledger_confidentiality_losses = 0;
  std::uint64_t ledger_violations = 0;
  double victim_per = 0.0;
  std::uint64_t victim_desyncs = 0;
};

struct AttackVerdict {
  std::string scenario;
  AttackKind kind = AttackKind::kEavesdrop;
  protocol::SecurityMode security = protocol::SecurityMode::kOn;
  bool succeeded = false;
  Evidence evidence;
  std::string to_json() const;
};

AttackVerdict run_eavesdrop(const AttackScenario& s);
AttackVerdict run_inject(const AttackScenario& s);
AttackVerdict run_replay(const AttackScenario& s);
AttackVerdict run_many_time_pad(const AttackScenario& s);
/// Same radio budget as run_inject but with random, malformed frames.
/// "succeeded" is never set; evidence carries the victim's PER and desyncs.
AttackVerdict run_jam(const AttackScenario& s);
AttackVerdict run_attack(const AttackScenario& s);

/// 1 - (1 - 2^-32)^attempts.
double forgery_bound(std::uint64_t attempts);

}  // namespace sfsec::adversary
