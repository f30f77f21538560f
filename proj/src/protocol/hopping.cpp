// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/protocol/hopping.hpp"

#include "sfsec/common/mix.hpp"

namespace sfsec::protocol {

std::uint8_t hop_channel(std::uint64_t ec, std::uint16_t slot, std::uint8_t period) {
  if (is_guaranteed(ec, slot, period)) return kGuaranteedChannel;
  const std::uint64_t h = mix64(mix64(ec ^ 0x486f7053656564ULL) + slot);
  // Multiply-shift keeps the mapping unbiased enough for 37 bins.
  return static_cast<std::uint8_t>((static_cast<unsigned __int128>(h) * kDataChannelCount) >> 64);
}

}  // namespace sfsec::protocol
