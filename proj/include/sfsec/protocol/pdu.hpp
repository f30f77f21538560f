// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "sfsec/common/bytes.hpp"
#include "sfsec/framing/frame.hpp"

namespace sfsec::protocol {

enum class PduKind : std::uint8_t { kInd = 0x49, kData = 0x44 };

inline constexpr std::uint8_t kBroadcast = 0xff;
inline constexpr std::size_t kPduHeaderSize = 4;
inline constexpr std::size_t kMaxAppPayload = framing::kMaxPayload - kPduHeaderSize;

/// Protocol data unit carried in the frame payload:
///   kind | rc | origin | target | body
/// The whole PDU is encrypted in secure mode.
struct Pdu {
  PduKind kind = PduKind::kData;
  std::uint8_t rc = 0;
  std::uint8_t origin = 0;
  std::uint8_t target = kBroadcast;
  Bytes body;

  friend bool operator==(const Pdu&, const Pdu&) = default;
};

Bytes encode_pdu(const Pdu& pdu);
std::optional<Pdu> decode_pdu(ByteView bytes);

/// IND body: EC (8 bytes, big-endian) | flags.
struct IndBody {
  std::uint64_t epoch_counter = 0;
  std::uint8_t flags = 0;
};

inline constexpr std::size_t kIndBodySize = 9;

Bytes encode_ind(const IndBody& ind);
std::optional<IndBody> decode_ind(ByteView body);

}  // namespace sfsec::protocol
