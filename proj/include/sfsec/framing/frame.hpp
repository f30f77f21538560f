// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "sfsec/common/bytes.hpp"
#include "sfsec/crypto/ccm.hpp"

namespace sfsec::framing {

inline constexpr std::size_t kMaxPayload = 251;
inline constexpr std::size_t kCrcBytes = 3;
inline constexpr std::size_t kLengthBytes = 1;

class PayloadTooLarge : public std::length_error {
 public:
  explicit PayloadTooLarge(std::size_t n);
};

/// Secure frames carry a length header and a MIC: length | payload | MIC | CRC.
/// Plain Atomic frames use fixed, schedule-known lengths: payload | CRC.
enum class FrameLayout : std::uint8_t { kLengthPrefixed, kFixedLength };

struct FrameFormat {
  FrameLayout layout = FrameLayout::kLengthPrefixed;
  bool has_mic = true;
  /// Payload size for kFixedLength frames; ignored otherwise.
  std::uint8_t fixed_payload_len = 0;

  static FrameFormat secure() { return {FrameLayout::kLengthPrefixed, true, 0}; }
  static FrameFormat plain(std::uint8_t payload_len) { return {FrameLayout::kFixedLength, false, payload_len}; }
};

struct Frame {
  std::uint8_t length = 0;
  Bytes payload;
  std::optional<crypto::Mic> mic;
  std::uint32_t crc = 0;
};

/// Serialized size of a frame with this payload size.
std::size_t frame_size(std::size_t payload_len, const FrameFormat& format);

/// Length-prefixed layout: length | payload | MIC? | CRC (CRC little-endian).
Bytes encode_frame(ByteView payload, const std::optional<crypto::Mic>& mic);

/// Fixed-length layout (no length header, no MIC).
Bytes encode_fixed_frame(ByteView payload);

enum class DecodeError : std::uint8_t { kNone, kCrcFailure, kLengthOverrun };

const char* to_string(DecodeError e);

struct DecodeResult {
  std::optional<Frame> frame;
  DecodeError error = DecodeError::kNone;
  /// Bytes the radio clocked in before stopping. Never more than the frame
  /// size implied by max_packet_length.
  std::size_t bytes_received = 0;

  bool ok() const { return frame.has_value(); }
};

/// Parses received bytes. max_packet_length bounds the length header (payload
/// bytes) the receiver will accept; anything above it ends reception right
/// after the header.
DecodeResult decode_frame(ByteView bytes, const FrameFormat& format, std::uint16_t max_packet_length);

}  // namespace sfsec::framing
