// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/framing/crc24.hpp"

#include <array>

namespace sfsec::framing {

namespace {

// 0x00065B bit-reversed over 24 bits.
constexpr std::uint32_t kPolyReflected = 0xDA6000;

constexpr std::uint32_t reflect24(std::uint32_t v) {
  std::uint32_t r = 0;
  for (int i = 0; i < 24; ++i) r |= ((v >> i) & 1u) << (23 - i);
  return r;
}

constexpr std::array<std::uint32_t, 256> make_table() {
  std::array<std::uint32_t, 256> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1u) ? (c >> 1) ^ kPolyReflected : c >> 1;
    t[i] = c;
  }
  return t;
}

constexpr auto kTable = make_table();

}  // namespace

std::uint32_t crc24(ByteView data, std::uint32_t init) {
  std::uint32_t crc = reflect24(init & 0xffffff);
  for (auto b : data) crc = (crc >> 8) ^ kTable[(crc ^ b) & 0xff];
  return crc & 0xffffff;
}

}  // namespace sfsec::framing
