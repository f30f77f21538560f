// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace sfsec::crypto {

using Block = std::array<std::uint8_t, 16>;

/// AES-128 forward cipher (FIPS-197). Only encryption is needed: CTR and
/// CBC-MAC both run the block cipher in the forward direction.
class Aes128 {
 public:
  explicit Aes128(const Block& key);

  Block encrypt(const Block& in) const;

 private:
  std::array<std::uint8_t, 176> round_keys_{};
};

Block aes128_encrypt_block(const Block& key, const Block& block);

}  // namespace sfsec::crypto
