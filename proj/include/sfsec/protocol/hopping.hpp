// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace sfsec::protocol {

/// Advertising-style channel used at guaranteed slots.
inline constexpr std::uint8_t kGuaranteedChannel = 37;
/// Pseudo-random slots hop over data channels 0..36.
inline constexpr std::uint8_t kDataChannelCount = 37;
inline constexpr std::uint8_t kDefaultGuaranteePeriod = 4;

/// Hopping index of a slot: phase counter in the high byte, relay counter in
/// the low byte. A receiver's hopping index always equals the RC it expects.
constexpr std::uint16_t slot_index(std::uint16_t pc, std::uint8_t rc) {
  return static_cast<std::uint16_t>((pc << 8) | rc);
}

/// Every period-th relay slot is guaranteed. The pattern rotates by one slot
/// per epoch so that a neighbour transmitting in a fixed run of slots lands on
/// a guaranteed slot within `period` epochs.
constexpr bool is_guaranteed(std::uint64_t ec, std::uint16_t slot, std::uint8_t period = kDefaultGuaranteePeriod) {
  return ((static_cast<std::uint64_t>(slot & 0xff) + ec % period) % period) == 0;
}

/// Channel for (ec, slot). Deterministic; kGuaranteedChannel at guaranteed
/// slots, otherwise uniform over the data channels.
std::uint8_t hop_channel(std::uint64_t ec, std::uint16_t slot, std::uint8_t period = kDefaultGuaranteePeriod);

}  // namespace sfsec::protocol
