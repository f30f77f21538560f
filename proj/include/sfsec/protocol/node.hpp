// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sfsec/common/time.hpp"
#include "sfsec/crypto/key.hpp"

namespace sfsec::protocol {

enum class SyncStatus : std::uint8_t { kUnjoined, kJoined, kDesynced };

std::string_view to_string(SyncStatus s);

/// Counter and sync state of one node. Clock and radio state live in the
/// simulator.
struct NodeState {
  std::uint8_t node_id = 0;
  /// EC of the current epoch (or the one expected next, before the IND).
  std::uint64_t epoch_counter = 0;
  std::uint16_t phase_counter = 0;
  std::uint8_t expected_rc = 0;
  SyncStatus sync = SyncStatus::kUnjoined;
  /// Local-clock time of the last computed flood start.
  std::optional<LocalTime> reference_time;
  crypto::Key128 network_key;
  std::optional<crypto::Key128> device_key;

  /// Consecutive epochs without an accepted IND.
  std::uint32_t missed_inds = 0;
  /// Lowest EC this node may ever adopt; guards against going backwards
  /// across restarts.
  std::uint64_t ec_floor = 0;
  /// Set when the EC record could not be trusted. The node must not send
  /// encrypted floods until an IND gives it a safe EC.
  bool fail_closed = false;
  /// The node that originates INDs and owns network time.
  bool is_timekeeper = false;

  bool joined() const { return sync == SyncStatus::kJoined; }
  /// Unjoined and desynced nodes scan the guaranteed channel.
  bool scanning() const { return sync != SyncStatus::kJoined; }
};

/// Epoch boundary: a joined node predicts the next EC. Returns false if the
/// counter space is exhausted (the node then fails closed).
bool begin_epoch(NodeState& s);

/// Whether an authenticated IND carrying `ec` may be adopted. Joined nodes
/// refuse an EC older than the one they expect, which stops replayed INDs
/// from rolling the counter back.
bool ind_acceptable(const NodeState& s, std::uint64_t ec);

/// Adopts the IND's EC and marks the node joined.
void adopt_ind(NodeState& s, std::uint64_t ec);

/// End of an IND phase with no accepted IND. After `desync_after` misses in a
/// row the node drops to desynced and rescans.
void miss_ind(NodeState& s, std::uint32_t desync_after);

}  // namespace sfsec::protocol
