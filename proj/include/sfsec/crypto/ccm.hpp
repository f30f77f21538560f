// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "sfsec/common/bytes.hpp"
#include "sfsec/common/time.hpp"
#include "sfsec/crypto/aes.hpp"
#include "sfsec/crypto/key.hpp"
#include "sfsec/crypto/nonce.hpp"

namespace sfsec::crypto {

inline constexpr std::size_t kMicSize = 4;
inline constexpr std::size_t kMaxPlaintext = 251;

struct Mic {
  std::array<std::uint8_t, kMicSize> bytes{};
  friend bool operator==(const Mic&, const Mic&) = default;
};

struct CcmOutput {
  Bytes ciphertext;
  Mic mic;
};

/// CCM (RFC 3610) with M=4, L=2 over AES-128.
/// Throws std::length_error if the plaintext exceeds kMaxPlaintext.
CcmOutput ccm_encrypt(const Key128& key, const Nonce& nonce, ByteView plaintext, ByteView aad);

/// Returns the plaintext, or nullopt on MIC mismatch (callers drop the packet).
std::optional<Bytes> ccm_decrypt(const Key128& key, const Nonce& nonce, ByteView ciphertext, ByteView aad,
                                 const Mic& mic);

/// General CCM with a 13-byte nonce (L=2) and an even tag length in [4, 16].
/// Exposed so the cipher can be checked against published vectors with other
/// tag lengths. Output is ciphertext followed by the tag.
Bytes ccm_seal(const Block& key, std::span<const std::uint8_t, kNonceSize> nonce, ByteView aad, ByteView plaintext,
               std::size_t tag_len);
std::optional<Bytes> ccm_open(const Block& key, std::span<const std::uint8_t, kNonceSize> nonce, ByteView aad,
                              ByteView sealed, std::size_t tag_len);

enum class CcmMode { kHardware, kSoftware };

/// Measured CCM computation time for one packet on the target SoC.
constexpr Duration ccm_latency(CcmMode mode) {
  return mode == CcmMode::kHardware ? Duration{80'000} : Duration{1'556'000};
}

/// Radio ramp-up upper bound on the target SoC.
inline constexpr Duration kRadioRampUp{50'000};

}  // namespace sfsec::crypto
