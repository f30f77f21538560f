// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <limits>

#include "sfsec/protocol/device_layer.hpp"
#include "sfsec/protocol/ec_store.hpp"
#include "sfsec/protocol/hopping.hpp"
#include "sfsec/protocol/node.hpp"
#include "sfsec/protocol/pdu.hpp"
#include "sfsec/protocol/schedule.hpp"
#include "sfsec/protocol/sync.hpp"

namespace sfsec::protocol {
namespace {

TEST(Sync, ReferenceTimeArithmetic) {
  EXPECT_EQ(compute_reference_time(LocalTime{1'000'000}, 1, Duration{200'000}).ns, 800'000);
  // Direct reception: only the frame's own airtime separates rx end from flood start.
  EXPECT_EQ(compute_reference_time(LocalTime{1'000'000}, 0, Duration{200'000}, Duration{50'000}).ns, 950'000);
}

TEST(Hopping, GuaranteedSlotsAlwaysOnGuaranteedChannel) {
  for (std::uint64_t ec = 0; ec < 10'000; ++ec) {
    for (std::uint16_t pc = 0; pc < 3; ++pc) {
      for (std::uint8_t rc = 0; rc < 12; ++rc) {
        const auto slot = slot_index(pc, rc);
        const auto ch = hop_channel(ec, slot);
        if (is_guaranteed(ec, slot)) {
          EXPECT_EQ(ch, kGuaranteedChannel);
        } else {
          EXPECT_LT(ch, kDataChannelCount);
        }
      }
    }
  }
}

TEST(Hopping, EveryEpochHasAGuaranteedSlotWithinPeriod) {
  for (std::uint64_t ec = 0; ec < 10'000; ++ec) {
    int found = 0;
    for (std::uint8_t rc = 0; rc < kDefaultGuaranteePeriod; ++rc) found += is_guaranteed(ec, slot_index(0, rc));
    EXPECT_EQ(found, 1);
  }
  // Over G consecutive epochs each IND slot position is guaranteed once.
  for (std::uint8_t rc = 0; rc < kDefaultGuaranteePeriod; ++rc) {
    int found = 0;
    for (std::uint64_t ec = 100; ec < 100 + kDefaultGuaranteePeriod; ++ec) found += is_guaranteed(ec, slot_index(0, rc));
    EXPECT_EQ(found, 1);
  }
}

TEST(Hopping, Deterministic) {
  for (std::uint64_t ec : {0ULL, 1ULL, 77ULL, ~0ULL}) {
    EXPECT_EQ(hop_channel(ec, 0x0103), hop_channel(ec, 0x0103));
  }
}

TEST(Hopping, NearUniformOverDataChannels) {
  std::array<std::uint64_t, kDataChannelCount> counts{};
  std::uint64_t total = 0;
  for (std::uint64_t ec = 0; ec < 10'000; ++ec) {
    for (std::uint8_t rc = 0; rc < 8; ++rc) {
      const auto slot = slot_index(1, rc);
      if (is_guaranteed(ec, slot)) continue;
      ++counts[hop_channel(ec, slot)];
      ++total;
    }
  }
  const double expected = static_cast<double>(total) / kDataChannelCount;
  double chi2 = 0.0;
  for (auto c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 36 degrees of freedom; 99.9th percentile is about 67.
  EXPECT_LT(chi2, 67.0);
}

TEST(Pdu, RoundTrip) {
  Pdu p{PduKind::kData, 3, 7, 9, {1, 2, 3}};
  const auto bytes = encode_pdu(p);
  ASSERT_EQ(bytes.size(), kPduHeaderSize + 3);
  EXPECT_EQ(decode_pdu(bytes), p);
}

TEST(Pdu, RejectsMalformed) {
  EXPECT_FALSE(decode_pdu(Bytes{0x44, 0, 1}).has_value());
  EXPECT_FALSE(decode_pdu(Bytes{0x13, 0, 1, 2}).has_value());
  Pdu big;
  big.body.resize(kMaxAppPayload + 1);
  EXPECT_THROW(encode_pdu(big), std::length_error);
}

TEST(Pdu, IndBody) {
  const IndBody ind{0x0102030405060708ULL, 1};
  const auto b = encode_ind(ind);
  ASSERT_EQ(b.size(), kIndBodySize);
  EXPECT_EQ(b[0], 0x01);
  const auto back = decode_ind(b);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->epoch_counter, ind.epoch_counter);
  EXPECT_FALSE(decode_ind(Bytes(8)).has_value());
}

TEST(EcStore, MemoryRestoreAdvancesPastLast) {
  MemoryEcStore s;
  EXPECT_EQ(restore_ec(s), 0u);
  s.save(41);
  EXPECT_EQ(restore_ec(s), 42u);
  s.corrupt();
  EXPECT_THROW(restore_ec(s), StoreCorrupt);
  s.wipe();
  EXPECT_EQ(restore_ec(s), 0u);
}

TEST(EcStore, FileRecordIsLittleEndianU64) {
  const auto dir = std::filesystem::temp_directory_path() / "sfsec_ec_store_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  FileEcStore s(dir / "node_1.ec");
  EXPECT_FALSE(s.load().has_value());
  s.save(0x0102030405060708ULL);
  std::ifstream in(s.path(), std::ios::binary);
  std::array<char, 8> raw{};
  in.read(raw.data(), raw.size());
  EXPECT_EQ(static_cast<unsigned char>(raw[0]), 0x08);
  EXPECT_EQ(static_cast<unsigned char>(raw[7]), 0x01);
  EXPECT_EQ(restore_ec(s), 0x0102030405060709ULL);
  std::ofstream(s.path(), std::ios::binary | std::ios::trunc) << "xyz";
  EXPECT_THROW(s.load(), StoreCorrupt);
  s.wipe();
  EXPECT_FALSE(s.load().has_value());
  std::filesystem::remove_all(dir);
}

TEST(EcStore, FullSixtyFourBitRange) {
  MemoryEcStore s;
  s.save(std::numeric_limits<std::uint64_t>::max() - 1);
  EXPECT_EQ(restore_ec(s), std::numeric_limits<std::uint64_t>::max());
  s.save(std::numeric_limits<std::uint64_t>::max());
  EXPECT_THROW(restore_ec(s), std::overflow_error);
}

TEST(Node, EpochIncrementsByOne) {
  NodeState s;
  s.sync = SyncStatus::kJoined;
  s.epoch_counter = 5;
  EXPECT_TRUE(begin_epoch(s));
  EXPECT_EQ(s.epoch_counter, 6u);
  s.epoch_counter = std::numeric_limits<std::uint64_t>::max();
  EXPECT_FALSE(begin_epoch(s));
  EXPECT_TRUE(s.fail_closed);
}

TEST(Node, IndAcceptance) {
  NodeState s;
  s.ec_floor = 10;
  EXPECT_FALSE(ind_acceptable(s, 9));
  EXPECT_TRUE(ind_acceptable(s, 10));
  adopt_ind(s, 12);
  EXPECT_TRUE(s.joined());
  EXPECT_EQ(s.epoch_counter, 12u);
  EXPECT_FALSE(ind_acceptable(s, 11));
  EXPECT_TRUE(ind_acceptable(s, 12));
}

TEST(Node, DesyncAfterMissedInds) {
  NodeState s;
  adopt_ind(s, 3);
  miss_ind(s, 3);
  miss_ind(s, 3);
  EXPECT_TRUE(s.joined());
  miss_ind(s, 3);
  EXPECT_EQ(s.sync, SyncStatus::kDesynced);
  adopt_ind(s, 7);
  EXPECT_TRUE(s.joined());
  EXPECT_EQ(s.missed_inds, 0u);
}

TEST(DeviceLayer, RoundTripAndWrongKey) {
  crypto::CcmEngine engine;
  const auto dk = crypto::Key128::derive(1, crypto::KeyRole::kDevice);
  const auto other = crypto::Key128::derive(2, crypto::KeyRole::kDevice);
  const Bytes payload = {'s', 'e', 'c', 'r', 'e', 't'};
  const auto nonce = app_nonce(9, 1, 4);
  const auto sealed = device_encrypt(engine, dk, payload, nonce);
  EXPECT_EQ(sealed.size(), payload.size() + crypto::kMicSize);
  EXPECT_EQ(device_decrypt(dk, sealed, nonce), payload);
  EXPECT_FALSE(device_decrypt(other, sealed, nonce).has_value());
  EXPECT_FALSE(device_decrypt(dk, sealed, app_nonce(9, 1, 5)).has_value());
}

TEST(DeviceLayer, PerInitiatorNoncesDiffer) {
  EXPECT_NE(app_nonce(3, 1, 1), app_nonce(3, 1, 2));
}

TEST(Schedule, SecureFramesFiveBytesLonger) {
  EpochSchedule s(500ms, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 6, 3},
                  {PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 100, 6, 3}});
  const auto phy = framing::PhyTable::defaults().get(framing::PhyMode::k1Mbps);
  const auto on = s.timings(phy, SecurityMode::kOn, {});
  const auto off = s.timings(phy, SecurityMode::kOff, {});
  EXPECT_EQ(on[1].frame_bytes, off[1].frame_bytes + 5);
  EXPECT_EQ(on[1].start - on[0].start, on[0].end() - on[0].start + 500us);
}

TEST(Schedule, PatternValidation) {
  EXPECT_THROW((PhaseSpec{Pattern::kP2P, {0, 1}, 2, 10, 6, 3}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((PhaseSpec{Pattern::kMP2P, {0, 1}, 2, 10, 6, 3}.validate()));
  EXPECT_EQ(parse_security("on+device_keys"), SecurityMode::kOnDeviceKeys);
  EXPECT_EQ(parse_pattern("MP2P"), Pattern::kMP2P);
}

}  // namespace
}  // namespace sfsec::protocol
