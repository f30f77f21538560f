// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/sim/timeline.hpp"

#include <algorithm>
#include <string>

namespace sfsec::sim {

std::vector<SimEvent> schedule_phase_timeline(const protocol::PhaseTiming& timing, SimTime epoch_start,
                                              std::uint16_t initiator, std::uint8_t slot_count,
                                              Duration keystream_lead) {
  std::vector<SimEvent> out;
  const std::uint8_t tx_slots = std::min(slot_count, timing.slots);
  out.reserve(timing.slots + 3u * tx_slots);
  for (std::uint8_t j = 0; j < timing.slots; ++j) {
    const SimTime at = epoch_start + timing.slot_offset(j);
    out.push_back({at, EventKind::kSlotStart, initiator, j, 0, 0});
    if (j < tx_slots) {
      out.push_back({at - keystream_lead, EventKind::kCcmReady, initiator, j, 0, 0});
      out.push_back({at, EventKind::kTxBegin, initiator, j, 0, 0});
      out.push_back({at + timing.airtime, EventKind::kTxEnd, initiator, j, 0, 0});
    }
  }
  std::sort(out.begin(), out.end(), [](const SimEvent& a, const SimEvent& b) { return EventOrder{}(b, a); });
  return out;
}

void check_epoch_fits(const std::vector<protocol::PhaseTiming>& timings, Duration epoch_interval) {
  if (timings.empty()) return;
  if (timings.back().end() > epoch_interval)
    throw protocol::EpochOverrun("phase timeline ends at " + std::to_string(timings.back().end().count()) +
                                 " ns, beyond the epoch interval");
}

}  // namespace sfsec::sim
