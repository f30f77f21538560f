// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/sim/event_queue.hpp"

namespace sfsec::sim {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kEpochBoundary: return "epoch_boundary";
    case EventKind::kSlotStart: return "slot_start";
    case EventKind::kCcmReady: return "ccm_ready";
    case EventKind::kTxBegin: return "tx_begin";
    case EventKind::kRxWindow: return "rx_window";
    case EventKind::kTxEnd: return "tx_end";
  }
  return "?";
}

}  // namespace sfsec::sim
