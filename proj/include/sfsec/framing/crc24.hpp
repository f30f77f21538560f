// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "sfsec/common/bytes.hpp"

namespace sfsec::framing {

/// BLE link-layer CRC: poly 0x00065B, reflected, init 0x555555, no final xor.
std::uint32_t crc24(ByteView data, std::uint32_t init = 0x555555);

}  // namespace sfsec::framing
