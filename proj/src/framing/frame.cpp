// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/framing/frame.hpp"

#include <string>

#include "sfsec/framing/crc24.hpp"

namespace sfsec::framing {

PayloadTooLarge::PayloadTooLarge(std::size_t n)
    : std::length_error("payload of " + std::to_string(n) + " bytes exceeds " + std::to_string(kMaxPayload)) {}

const char* to_string(DecodeError e) {
  switch (e) {
    case DecodeError::kNone:
      return "none";
    case DecodeError::kCrcFailure:
      return "crc_failure";
    case DecodeError::kLengthOverrun:
      return "length_overrun";
  }
  return "?";
}

std::size_t frame_size(std::size_t payload_len, const FrameFormat& format) {
  const std::size_t header = format.layout == FrameLayout::kLengthPrefixed ? kLengthBytes : 0;
  const std::size_t mic = format.has_mic ? crypto::kMicSize : 0;
  return header + payload_len + mic + kCrcBytes;
}

namespace {

void append_crc(Bytes& out) {
  const std::uint32_t crc = crc24(out);
  out.push_back(static_cast<std::uint8_t>(crc));
  out.push_back(static_cast<std::uint8_t>(crc >> 8));
  out.push_back(static_cast<std::uint8_t>(crc >> 16));
}

std::uint32_t read_crc(ByteView b) { return b[0] | (b[1] << 8) | (static_cast<std::uint32_t>(b[2]) << 16); }

}  // namespace

Bytes encode_frame(ByteView payload, const std::optional<crypto::Mic>& mic) {
  if (payload.size() > kMaxPayload) throw PayloadTooLarge(payload.size());
  Bytes out;
  out.reserve(frame_size(payload.size(), {FrameLayout::kLengthPrefixed, mic.has_value(), 0}));
  out.push_back(static_cast<std::uint8_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  if (mic) out.insert(out.end(), mic->bytes.begin(), mic->bytes.end());
  append_crc(out);
  return out;
}

Bytes encode_fixed_frame(ByteView payload) {
  if (payload.size() > kMaxPayload) throw PayloadTooLarge(payload.size());
  Bytes out(payload.begin(), payload.end());
  append_crc(out);
  return out;
}

DecodeResult decode_frame(ByteView bytes, const FrameFormat& format, std::uint16_t max_packet_length) {
  DecodeResult r;
  std::size_t header = 0;
  std::size_t length = 0;
  if (format.layout == FrameLayout::kLengthPrefixed) {
    if (bytes.empty()) {
      r.error = DecodeError::kCrcFailure;
      return r;
    }
    header = kLengthBytes;
    length = bytes[0];
    if (length > max_packet_length || length > kMaxPayload) {
      // Radio stops at the header; the rest of the hop is left untouched.
      r.error = DecodeError::kLengthOverrun;
      r.bytes_received = kLengthBytes;
      return r;
    }
  } else {
    length = format.fixed_payload_len;
  }

  const std::size_t mic = format.has_mic ? crypto::kMicSize : 0;
  const std::size_t total = header + length + mic + kCrcBytes;
  r.bytes_received = total;
  if (bytes.size() < total) {
    // The receiver clocks in noise past the end of the transmission.
    r.error = DecodeError::kCrcFailure;
    return r;
  }

  const std::size_t covered = header + length + mic;
  const std::uint32_t expected = read_crc(bytes.subspan(covered, kCrcBytes));
  if (crc24(bytes.first(covered)) != expected) {
    r.error = DecodeError::kCrcFailure;
    return r;
  }

  Frame f;
  f.length = static_cast<std::uint8_t>(length);
  f.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header),
                   bytes.begin() + static_cast<std::ptrdiff_t>(header + length));
  if (mic) {
    crypto::Mic m;
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(header + length), crypto::kMicSize, m.bytes.begin());
    f.mic = m;
  }
  f.crc = expected;
  r.frame = std::move(f);
  return r;
}

}  // namespace sfsec::framing
