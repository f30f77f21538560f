// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/protocol/node.hpp"

#include <limits>

namespace sfsec::protocol {

std::string_view to_string(SyncStatus s) {
  switch (s) {
    case SyncStatus::kUnjoined: return "unjoined";
    case SyncStatus::kJoined: return "joined";
    case SyncStatus::kDesynced: return "desynced";
  }
  return "?";
}

bool begin_epoch(NodeState& s) {
  if (!s.joined()) return true;
  if (s.epoch_counter == std::numeric_limits<std::uint64_t>::max()) {
    s.fail_closed = true;
    s.sync = SyncStatus::kUnjoined;
    return false;
  }
  ++s.epoch_counter;
  s.phase_counter = 0;
  s.expected_rc = 0;
  return true;
}

bool ind_acceptable(const NodeState& s, std::uint64_t ec) {
  if (ec < s.ec_floor) return false;
  if (s.joined() && ec < s.epoch_counter) return false;
  return true;
}

void adopt_ind(NodeState& s, std::uint64_t ec) {
  s.epoch_counter = ec;
  s.sync = SyncStatus::kJoined;
  s.missed_inds = 0;
  s.fail_closed = false;
  if (ec > s.ec_floor) s.ec_floor = ec;
}

void miss_ind(NodeState& s, std::uint32_t desync_after) {
  if (!s.joined()) return;
  ++s.missed_inds;
  if (s.missed_inds >= desync_after) {
    s.sync = SyncStatus::kDesynced;
    s.reference_time.reset();
  }
}

}  // namespace sfsec::protocol
