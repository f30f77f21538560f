// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sfsec {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Lower-case hex, no separators.
std::string to_hex(ByteView data);

/// Parses hex digits, ignoring whitespace. A lone "-" yields an empty buffer.
/// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view text);

/// 64-bit FNV-1a. Used for plaintext fingerprints, not for security.
std::uint64_t fingerprint(ByteView data);

inline void xor_into(std::span<std::uint8_t> dst, ByteView src) {
  for (std::size_t i = 0; i < dst.size() && i < src.size(); ++i) dst[i] ^= src[i];
}

}  // namespace sfsec
