// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "sfsec/common/time.hpp"

namespace sfsec::protocol {

/// Local-clock estimate of when the flood started. rx_end is the local time at
/// which the frame finished; rc hops of hop_duration precede it, plus the
/// frame's own airtime.
constexpr LocalTime compute_reference_time(LocalTime rx_end, std::uint8_t rc, Duration hop_duration,
                                           Duration airtime = Duration{0}) {
  return rx_end - airtime - hop_duration * rc;
}

}  // namespace sfsec::protocol
