// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "sfsec/protocol/schedule.hpp"
#include "sfsec/sim/event_queue.hpp"

namespace sfsec::sim {

/// Nominal events of one phase in network time: a slot_start per slot at
/// hop spacing, and for the initiator a ccm_ready / tx_begin / tx_end triple
/// per transmit slot. ccm_ready precedes tx_begin by keystream_lead.
std::vector<SimEvent> schedule_phase_timeline(const protocol::PhaseTiming& timing, SimTime epoch_start,
                                              std::uint16_t initiator, std::uint8_t slot_count,
                                              Duration keystream_lead);

/// Throws protocol::EpochOverrun if the timings leave no room in the epoch.
void check_epoch_fits(const std::vector<protocol::PhaseTiming>& timings, Duration epoch_interval);

}  // namespace sfsec::sim
