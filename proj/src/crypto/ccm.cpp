// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/crypto/ccm.hpp"

#include <algorithm>
#include <stdexcept>

namespace sfsec::crypto {

namespace {

constexpr std::size_t kLengthOctets = 2;  // L

void check_params(std::size_t aad_len, std::size_t text_len, std::size_t tag_len) {
  if (tag_len < 4 || tag_len > 16 || tag_len % 2 != 0) throw std::invalid_argument("ccm: tag length must be even, 4..16");
  if (text_len > 0xffff) throw std::length_error("ccm: message too long for L=2");
  if (aad_len >= 0xff00) throw std::length_error("ccm: associated data too long");
}

Block counter_block(std::span<const std::uint8_t, kNonceSize> nonce, std::uint16_t i) {
  Block a{};
  a[0] = kLengthOctets - 1;
  std::copy(nonce.begin(), nonce.end(), a.begin() + 1);
  a[14] = static_cast<std::uint8_t>(i >> 8);
  a[15] = static_cast<std::uint8_t>(i);
  return a;
}

// CBC-MAC over B_0 | encoded aad | plaintext, zero IV. Returns the full block.
Block cbc_mac(const Aes128& aes, std::span<const std::uint8_t, kNonceSize> nonce, ByteView aad, ByteView plaintext,
              std::size_t tag_len) {
  Block x{};
  x[0] = static_cast<std::uint8_t>((aad.empty() ? 0x00 : 0x40) | (((tag_len - 2) / 2) << 3) | (kLengthOctets - 1));
  std::copy(nonce.begin(), nonce.end(), x.begin() + 1);
  x[14] = static_cast<std::uint8_t>(plaintext.size() >> 8);
  x[15] = static_cast<std::uint8_t>(plaintext.size());
  x = aes.encrypt(x);

  auto absorb = [&](ByteView data, std::size_t offset_in_block) {
    // Feeds data starting at offset_in_block of the current block; zero-pads the tail.
    std::size_t pos = offset_in_block;
    for (auto b : data) {
      x[pos++] ^= b;
      if (pos == 16) {
        x = aes.encrypt(x);
        pos = 0;
      }
    }
    if (pos != 0) x = aes.encrypt(x);
  };

  if (!aad.empty()) {
    x[0] ^= static_cast<std::uint8_t>(aad.size() >> 8);
    x[1] ^= static_cast<std::uint8_t>(aad.size());
    absorb(aad, 2);
  }
  if (!plaintext.empty()) absorb(plaintext, 0);
  return x;
}

void ctr_xor(const Aes128& aes, std::span<const std::uint8_t, kNonceSize> nonce, std::span<std::uint8_t> data) {
  std::uint16_t i = 1;
  for (std::size_t off = 0; off < data.size(); off += 16, ++i) {
    const Block s = aes.encrypt(counter_block(nonce, i));
    const std::size_t n = std::min<std::size_t>(16, data.size() - off);
    for (std::size_t j = 0; j < n; ++j) data[off + j] ^= s[j];
  }
}

Bytes seal_with(const Aes128& aes, std::span<const std::uint8_t, kNonceSize> nonce, ByteView aad, ByteView plaintext,
                std::size_t tag_len) {
  check_params(aad.size(), plaintext.size(), tag_len);
  const Block t = cbc_mac(aes, nonce, aad, plaintext, tag_len);
  const Block s0 = aes.encrypt(counter_block(nonce, 0));

  Bytes out(plaintext.begin(), plaintext.end());
  ctr_xor(aes, nonce, out);
  for (std::size_t j = 0; j < tag_len; ++j) out.push_back(t[j] ^ s0[j]);
  return out;
}

std::optional<Bytes> open_with(const Aes128& aes, std::span<const std::uint8_t, kNonceSize> nonce, ByteView aad,
                               ByteView sealed, std::size_t tag_len) {
  if (sealed.size() < tag_len) return std::nullopt;
  const std::size_t text_len = sealed.size() - tag_len;
  check_params(aad.size(), text_len, tag_len);

  Bytes plain(sealed.begin(), sealed.begin() + static_cast<std::ptrdiff_t>(text_len));
  ctr_xor(aes, nonce, plain);

  const Block t = cbc_mac(aes, nonce, aad, plain, tag_len);
  const Block s0 = aes.encrypt(counter_block(nonce, 0));
  std::uint8_t diff = 0;
  for (std::size_t j = 0; j < tag_len; ++j) diff |= static_cast<std::uint8_t>((t[j] ^ s0[j]) ^ sealed[text_len + j]);
  if (diff != 0) return std::nullopt;
  return plain;
}

}  // namespace

Bytes ccm_seal(const Block& key, std::span<const std::uint8_t, kNonceSize> nonce, ByteView aad, ByteView plaintext,
               std::size_t tag_len) {
  return seal_with(Aes128(key), nonce, aad, plaintext, tag_len);
}

std::optional<Bytes> ccm_open(const Block& key, std::span<const std::uint8_t, kNonceSize> nonce, ByteView aad,
                              ByteView sealed, std::size_t tag_len) {
  return open_with(Aes128(key), nonce, aad, sealed, tag_len);
}

CcmOutput ccm_encrypt(const Key128& key, const Nonce& nonce, ByteView plaintext, ByteView aad) {
  if (plaintext.size() > kMaxPlaintext) throw std::length_error("ccm_encrypt: plaintext exceeds 251 bytes");
  const auto n = nonce.bytes();
  Bytes sealed = ccm_seal(key.bytes(), n, aad, plaintext, kMicSize);
  CcmOutput out;
  std::copy(sealed.end() - kMicSize, sealed.end(), out.mic.bytes.begin());
  sealed.resize(sealed.size() - kMicSize);
  out.ciphertext = std::move(sealed);
  return out;
}

std::optional<Bytes> ccm_decrypt(const Key128& key, const Nonce& nonce, ByteView ciphertext, ByteView aad,
                                 const Mic& mic) {
  if (ciphertext.size() > kMaxPlaintext) return std::nullopt;
  Bytes sealed(ciphertext.begin(), ciphertext.end());
  sealed.insert(sealed.end(), mic.bytes.begin(), mic.bytes.end());
  const auto n = nonce.bytes();
  return ccm_open(key.bytes(), n, aad, sealed, kMicSize);
}

}  // namespace sfsec::crypto
