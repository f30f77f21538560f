// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>

#include "sfsec/common/bytes.hpp"

namespace sfsec::crypto {

enum class KeyRole : std::uint8_t { kNetwork, kDevice };

/// 128-bit AES key tagged with the layer it belongs to.
class Key128 {
 public:
  Key128() = default;
  Key128(const std::array<std::uint8_t, 16>& bytes, KeyRole role) : bytes_(bytes), role_(role) {}

  static Key128 network(const std::array<std::uint8_t, 16>& bytes) { return {bytes, KeyRole::kNetwork}; }
  static Key128 device(const std::array<std::uint8_t, 16>& bytes) { return {bytes, KeyRole::kDevice}; }

  /// Deterministic key derived from a 64-bit label, for simulations and tests.
  static Key128 derive(std::uint64_t label, KeyRole role);

  const std::array<std::uint8_t, 16>& bytes() const { return bytes_; }
  KeyRole role() const { return role_; }

  friend bool operator==(const Key128&, const Key128&) = default;
  friend auto operator<=>(const Key128&, const Key128&) = default;

 private:
  std::array<std::uint8_t, 16> bytes_{};
  KeyRole role_ = KeyRole::kNetwork;
};

}  // namespace sfsec::crypto
