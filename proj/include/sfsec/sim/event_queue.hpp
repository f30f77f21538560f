// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <queue>
#include <string_view>
#include <vector>

#include "sfsec/common/time.hpp"

namespace sfsec::sim {

/// Declaration order is the tie-break priority at equal timestamps.
enum class EventKind : std::uint8_t { kEpochBoundary, kSlotStart, kCcmReady, kTxBegin, kRxWindow, kTxEnd };

std::string_view to_string(EventKind k);

struct SimEvent {
  SimTime time{};
  EventKind kind = EventKind::kSlotStart;
  std::uint16_t node = 0;
  std::uint8_t slot = 0;
  /// Caller-defined payload reference.
  std::uint32_t ref = 0;
  std::uint64_t seq = 0;
};

/// Strict (time, kind, node, insertion) order.
struct EventOrder {
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    if (a.node != b.node) return a.node > b.node;
    return a.seq > b.seq;
  }
};

class EventQueue {
 public:
  void push(SimEvent e) {
    e.seq = next_seq_++;
    heap_.push(e);
  }
  SimEvent pop() {
    SimEvent e = heap_.top();
    heap_.pop();
    return e;
  }
  const SimEvent& top() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace sfsec::sim
