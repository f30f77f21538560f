// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/protocol/device_layer.hpp"

#include <stdexcept>

namespace sfsec::protocol {

Bytes device_encrypt(crypto::CcmEngine& engine, const crypto::Key128& device_key, ByteView payload,
                     const crypto::Nonce& nonce) {
  if (device_key.role() != crypto::KeyRole::kDevice) throw std::invalid_argument("inner layer needs a device key");
  auto out = engine.seal(device_key, nonce, payload, {}, crypto::NonceUse::kUnique);
  Bytes sealed = std::move(out.ciphertext);
  sealed.insert(sealed.end(), out.mic.bytes.begin(), out.mic.bytes.end());
  return sealed;
}

std::optional<Bytes> device_decrypt(const crypto::Key128& device_key, ByteView sealed, const crypto::Nonce& nonce) {
  if (sealed.size() < crypto::kMicSize) return std::nullopt;
  const std::size_t n = sealed.size() - crypto::kMicSize;
  crypto::Mic mic;
  std::copy(sealed.begin() + static_cast<std::ptrdiff_t>(n), sealed.end(), mic.bytes.begin());
  return crypto::ccm_decrypt(device_key, nonce, sealed.first(n), {}, mic);
}

}  // namespace sfsec::protocol
