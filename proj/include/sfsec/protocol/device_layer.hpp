// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "sfsec/common/bytes.hpp"
#include "sfsec/crypto/nonce_ledger.hpp"

namespace sfsec::protocol {

/// Inner nonce: EC | PC | initiator id in the RC position. Distinct initiators
/// of one MP2P phase never share it.
inline crypto::Nonce app_nonce(std::uint64_t ec, std::uint16_t pc, std::uint8_t initiator) {
  return crypto::build_nonce(ec, pc, initiator);
}

/// Inner device-key layer: ciphertext | MIC. Runs before the phase starts, so
/// its latency is off the slot timeline.
Bytes device_encrypt(crypto::CcmEngine& engine, const crypto::Key128& device_key, ByteView payload,
                     const crypto::Nonce& nonce);

/// nullopt on authentication failure (wrong key or tampering).
std::optional<Bytes> device_decrypt(const crypto::Key128& device_key, ByteView sealed, const crypto::Nonce& nonce);

}  // namespace sfsec::protocol
