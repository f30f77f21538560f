// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>

namespace sfsec::crypto {

inline constexpr std::size_t kNonceSize = 13;

/// Multipart IV assembled from the flood counters both ends already agree on.
/// Wire layout (big-endian): EC(8) | PC(2) | RC(1) | 00 00.
struct Nonce {
  std::uint64_t epoch_counter = 0;
  std::uint16_t phase_counter = 0;
  std::uint8_t relay_counter = 0;

  std::array<std::uint8_t, kNonceSize> bytes() const;

  friend bool operator==(const Nonce&, const Nonce&) = default;
  friend auto operator<=>(const Nonce&, const Nonce&) = default;
};

Nonce build_nonce(std::uint64_t ec, std::uint16_t pc, std::uint8_t rc);

/// The constant IV used for IND floods so that joining nodes can decode them.
inline constexpr Nonce kIndNonce{};

}  // namespace sfsec::crypto
