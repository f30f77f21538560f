// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>

namespace sfsec {

// All simulated time is integer nanoseconds. The 0.5 us coherence bound must be
// exactly representable.
using Duration = std::chrono::nanoseconds;

/// True (simulator) time since the start of a run.
using SimTime = std::chrono::nanoseconds;

/// A node's own clock reading. Kept distinct from SimTime so the two cannot be
/// mixed up silently.
struct LocalTime {
  std::int64_t ns = 0;

  friend constexpr bool operator==(LocalTime, LocalTime) = default;
  friend constexpr auto operator<=>(LocalTime, LocalTime) = default;
  constexpr LocalTime operator+(Duration d) const { return {ns + d.count()}; }
  constexpr LocalTime operator-(Duration d) const { return {ns - d.count()}; }
  constexpr Duration operator-(LocalTime o) const { return Duration{ns - o.ns}; }
};

using namespace std::chrono_literals;

}  // namespace sfsec
