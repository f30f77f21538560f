// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "sfsec/framing/crc24.hpp"
#include "sfsec/framing/frame.hpp"
#include "sfsec/framing/phy.hpp"

using namespace sfsec;
using namespace sfsec::framing;

namespace {

Bytes pattern(std::size_t n) {
  Bytes b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(i * 7 + 3);
  return b;
}

const crypto::Mic kMic{{0xde, 0xad, 0xbe, 0xef}};

}  // namespace

TEST(Crc24, CatalogueCheckValue) {
  const std::string check = "123456789";
  EXPECT_EQ(crc24(ByteView(reinterpret_cast<const std::uint8_t*>(check.data()), check.size())), 0xc25a56u);
  // Values from a bitwise (non-table) reference.
  EXPECT_EQ(crc24(Bytes{0x00}), 0xe29d2au);
  Bytes seq(20);
  for (int i = 0; i < 20; ++i) seq[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(crc24(seq), 0x3d8729u);
}

TEST(Frame, EmptyFrameIsHeaderAndCrc) {
  const Bytes f = encode_frame({}, std::nullopt);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[0], 0x00);
}

TEST(Frame, SecureFrameLayout) {
  const Bytes payload = pattern(20);
  const Bytes f = encode_frame(payload, kMic);
  ASSERT_EQ(f.size(), 28u);
  EXPECT_EQ(f[0], 20);
  EXPECT_TRUE(std::equal(payload.begin(), payload.end(), f.begin() + 1));
  EXPECT_EQ(f[21], 0xde);
  EXPECT_EQ(f[24], 0xef);
}

TEST(Frame, SecureOverheadIsFiveBytesForEverySize) {
  for (std::size_t n = 0; n <= kMaxPayload; ++n) {
    const Bytes p = pattern(n);
    EXPECT_EQ(encode_frame(p, kMic).size(), encode_fixed_frame(p).size() + 5) << n;
    EXPECT_EQ(frame_size(n, FrameFormat::secure()), frame_size(n, FrameFormat::plain(0)) + 5);
  }
}

TEST(Frame, PayloadTooLarge) {
  EXPECT_THROW(encode_frame(pattern(252), kMic), PayloadTooLarge);
  EXPECT_THROW(encode_fixed_frame(pattern(252)), PayloadTooLarge);
}

TEST(Frame, RoundTripAllLengths) {
  for (std::size_t n = 0; n <= kMaxPayload; ++n) {
    const Bytes p = pattern(n);
    for (bool with_mic : {false, true}) {
      const auto mic = with_mic ? std::optional(kMic) : std::nullopt;
      const auto r = decode_frame(encode_frame(p, mic), {FrameLayout::kLengthPrefixed, with_mic, 0}, 255);
      ASSERT_TRUE(r.ok()) << n;
      EXPECT_EQ(r.frame->payload, p);
      EXPECT_EQ(r.frame->length, n);
      EXPECT_EQ(r.frame->mic.has_value(), with_mic);
      if (with_mic) {
        EXPECT_EQ(*r.frame->mic, kMic);
      }
    }
    const auto fixed = decode_frame(encode_fixed_frame(p), FrameFormat::plain(static_cast<std::uint8_t>(n)), 255);
    ASSERT_TRUE(fixed.ok());
    EXPECT_EQ(fixed.frame->payload, p);
  }
}

TEST(Frame, CorruptedLengthIsCappedByMaxPacketLength) {
  Bytes f = encode_frame(pattern(40), kMic);
  f[0] = 0xff;
  const auto r = decode_frame(f, FrameFormat::secure(), 60);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.error, DecodeError::kLengthOverrun);
  EXPECT_EQ(r.bytes_received, 1u);
}

TEST(Frame, BytesReceivedNeverExceedMaxPacketFrame) {
  const Bytes base = encode_frame(pattern(40), kMic);
  for (int v = 0; v < 256; ++v) {
    Bytes f = base;
    f[0] = static_cast<std::uint8_t>(v);
    const auto r = decode_frame(f, FrameFormat::secure(), 40);
    EXPECT_LE(r.bytes_received, frame_size(40, FrameFormat::secure()));
    if (v != 40) {
      EXPECT_FALSE(r.ok()) << v;
    }
  }
}

TEST(Frame, SinglePayloadByteCorruptionFailsCrc) {
  const Bytes base = encode_frame(pattern(20), kMic);
  for (std::size_t i = 1; i < base.size(); ++i) {
    for (std::uint8_t x : {0x01, 0x80, 0xff}) {
      Bytes f = base;
      f[i] ^= x;
      const auto r = decode_frame(f, FrameFormat::secure(), 255);
      EXPECT_EQ(r.error, DecodeError::kCrcFailure) << i;
    }
  }
}

TEST(Airtime, LinearModel) {
  const auto t = PhyTable::defaults();
  const Phy& p2 = t.get(PhyMode::k2Mbps);
  EXPECT_EQ(p2.per_byte_time, 4us);
  EXPECT_EQ(airtime(128, p2) - airtime(28, p2), 400us);
}

TEST(Airtime, BitrateRatios) {
  const auto t = PhyTable::defaults();
  EXPECT_EQ(t.get(PhyMode::k1Mbps).per_byte_time, 2 * t.get(PhyMode::k2Mbps).per_byte_time);
  EXPECT_EQ(t.get(PhyMode::k125Kbps).per_byte_time, 4 * t.get(PhyMode::k500Kbps).per_byte_time);
  for (std::size_t n = 0; n <= kMaxFrameBytes; n += 13) {
    EXPECT_EQ(airtime(n, t.get(PhyMode::k1Mbps)) - t.get(PhyMode::k1Mbps).preamble_overhead,
              2 * (airtime(n, t.get(PhyMode::k2Mbps)) - t.get(PhyMode::k2Mbps).preamble_overhead));
  }
}

TEST(Airtime, MonotoneInLengthAndBitrate) {
  const auto t = PhyTable::defaults();
  for (auto m : kAllPhys) {
    for (std::size_t n = 1; n <= kMaxFrameBytes; ++n) EXPECT_LT(airtime(n - 1, t.get(m)), airtime(n, t.get(m)));
  }
  for (std::size_t n = 0; n <= kMaxFrameBytes; ++n) {
    EXPECT_GT(airtime(n, t.get(PhyMode::k125Kbps)), airtime(n, t.get(PhyMode::k500Kbps)));
    EXPECT_GT(airtime(n, t.get(PhyMode::k500Kbps)), airtime(n, t.get(PhyMode::k1Mbps)));
    EXPECT_GT(airtime(n, t.get(PhyMode::k1Mbps)), airtime(n, t.get(PhyMode::k2Mbps)));
  }
  EXPECT_THROW(airtime(kMaxFrameBytes + 1, t.get(PhyMode::k2Mbps)), std::out_of_range);
}

TEST(PhyTable, JsonRoundTripAndValidation) {
  const auto t = PhyTable::defaults();
  const auto back = PhyTable::from_json(t.to_json());
  for (auto m : kAllPhys) {
    EXPECT_EQ(back.get(m).preamble_overhead, t.get(m).preamble_overhead);
    EXPECT_EQ(back.get(m).per_byte_time, t.get(m).per_byte_time);
  }
  const auto custom = PhyTable::from_json(R"({"500k": {"preamble_us": 390.5, "per_byte_us": 16, "crc_bytes": 3}})");
  EXPECT_EQ(custom.get(PhyMode::k500Kbps).preamble_overhead, Duration{390'500});
  EXPECT_EQ(custom.get(PhyMode::k2Mbps).per_byte_time, 4us);
  EXPECT_THROW(PhyTable::from_json(R"({"3M": {"preamble_us": 1, "per_byte_us": 1}})"), std::invalid_argument);
  EXPECT_THROW(PhyTable::from_json(R"({"2M": {"preamble_us": 1, "per_byte_us": 0}})"), std::invalid_argument);
}
