// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/crypto/nonce.hpp"

#include "sfsec/crypto/key.hpp"

namespace sfsec::crypto {

std::array<std::uint8_t, kNonceSize> Nonce::bytes() const {
  std::array<std::uint8_t, kNonceSize> out{};
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(epoch_counter >> (56 - 8 * i));
  out[8] = static_cast<std::uint8_t>(phase_counter >> 8);
  out[9] = static_cast<std::uint8_t>(phase_counter);
  out[10] = relay_counter;
  return out;
}

Nonce build_nonce(std::uint64_t ec, std::uint16_t pc, std::uint8_t rc) { return Nonce{ec, pc, rc}; }

Key128 Key128::derive(std::uint64_t label, KeyRole role) {
  // splitmix64 stream; adequate for simulation keys, not for real deployments.
  std::array<std::uint8_t, 16> bytes{};
  std::uint64_t state = label ^ (role == KeyRole::kDevice ? 0xd1b54a32d192ed03ULL : 0x8bb84b93962eacc9ULL);
  for (int half = 0; half < 2; ++half) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    for (int i = 0; i < 8; ++i) bytes[8 * half + i] = static_cast<std::uint8_t>(z >> (8 * i));
  }
  return Key128(bytes, role);
}

}  // namespace sfsec::crypto
