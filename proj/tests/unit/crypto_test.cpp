// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sfsec/crypto/aes.hpp"
#include "sfsec/crypto/ccm.hpp"
#include "sfsec/crypto/nonce.hpp"
#include "sfsec/crypto/nonce_ledger.hpp"

using namespace sfsec;
using namespace sfsec::crypto;

namespace {

std::vector<std::vector<Bytes>> load_fixture(const std::string& name) {
  std::ifstream in(std::string(SFSEC_FIXTURE_DIR) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  std::vector<std::vector<Bytes>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<Bytes> fields;
    std::string f;
    while (ss >> f) fields.push_back(from_hex(f));
    rows.push_back(std::move(fields));
  }
  return rows;
}

Block to_block(const Bytes& b) {
  Block out{};
  std::copy_n(b.begin(), 16, out.begin());
  return out;
}

Nonce parse_nonce(const Bytes& b) {
  Nonce n;
  for (int i = 0; i < 8; ++i) n.epoch_counter = (n.epoch_counter << 8) | b[i];
  n.phase_counter = static_cast<std::uint16_t>((b[8] << 8) | b[9]);
  n.relay_counter = b[10];
  return n;
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

const Key128 kKey = Key128::network({0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08, 0x09, 0x0a, 0x0b, 0x0c,
                                     0x0d, 0x0e, 0x0f});

}  // namespace

TEST(Aes128, MatchesPublishedVectors) {
  const auto rows = load_fixture("aes128_vectors.txt");
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& r : rows) {
    const Block ct = aes128_encrypt_block(to_block(r[0]), to_block(r[1]));
    EXPECT_EQ(to_hex(ct), to_hex(r[2]));
  }
}

TEST(Aes128, Fips197AppendixC1) {
  const Block key = to_block(from_hex("000102030405060708090a0b0c0d0e0f"));
  const Block pt = to_block(from_hex("00112233445566778899aabbccddeeff"));
  EXPECT_EQ(to_hex(aes128_encrypt_block(key, pt)), "69c4e0d86a7b0430d8cdb78070b4c55a");
}

TEST(Aes128, DeterministicAndInjective) {
  std::mt19937_64 rng(7);
  const Aes128 aes(to_block(random_bytes(rng, 16)));
  for (int i = 0; i < 200; ++i) {
    const Block a = to_block(random_bytes(rng, 16));
    Block b = a;
    b[static_cast<std::size_t>(i % 16)] ^= static_cast<std::uint8_t>(1u << (i % 8));
    EXPECT_EQ(aes.encrypt(a), aes.encrypt(a));
    EXPECT_NE(aes.encrypt(a), aes.encrypt(b));
  }
}

TEST(Nonce, ZeroCounters) {
  EXPECT_EQ(to_hex(build_nonce(0, 0, 0).bytes()), "00000000000000000000000000");
  EXPECT_EQ(kIndNonce.bytes(), build_nonce(0, 0, 0).bytes());
}

TEST(Nonce, BigEndianPlacement) {
  EXPECT_EQ(to_hex(build_nonce(1, 0, 0).bytes()), "00000000000000010000000000");
  EXPECT_EQ(to_hex(build_nonce(0x0102030405060708ULL, 0x0a0b, 0x0c).bytes()), "01020304050607080a0b0c0000");
  EXPECT_EQ(to_hex(build_nonce(~0ULL, 0xffff, 0xff).bytes()), "ffffffffffffffffffffff0000");
}

TEST(Ccm, Rfc3610PacketVectors) {
  const auto rows = load_fixture("ccm_rfc3610.txt");
  ASSERT_EQ(rows.size(), 12u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::size_t tag_len = r[5].size();
    std::array<std::uint8_t, kNonceSize> nonce{};
    std::copy_n(r[1].begin(), kNonceSize, nonce.begin());
    Bytes expected = r[4];
    expected.insert(expected.end(), r[5].begin(), r[5].end());
    const Bytes sealed = ccm_seal(to_block(r[0]), nonce, r[2], r[3], tag_len);
    EXPECT_EQ(to_hex(sealed), to_hex(expected)) << "vector #" << i + 1;
    const auto opened = ccm_open(to_block(r[0]), nonce, r[2], sealed, tag_len);
    ASSERT_TRUE(opened.has_value());
    EXPECT_EQ(*opened, r[3]);
  }
}

TEST(Ccm, Rfc3610InputsWithFourByteMic) {
  const auto rows = load_fixture("ccm_m4_rfc3610_inputs.txt");
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) {
    std::array<std::uint8_t, kNonceSize> nonce{};
    std::copy_n(r[1].begin(), kNonceSize, nonce.begin());
    Bytes expected = r[4];
    expected.insert(expected.end(), r[5].begin(), r[5].end());
    EXPECT_EQ(to_hex(ccm_seal(to_block(r[0]), nonce, r[2], r[3], 4)), to_hex(expected));
  }
}

TEST(Ccm, ProtocolShapedVectors) {
  const auto rows = load_fixture("ccm_m4_protocol.txt");
  ASSERT_GE(rows.size(), 10u);
  for (const auto& r : rows) {
    const Key128 key = Key128::network([&] {
      std::array<std::uint8_t, 16> k{};
      std::copy_n(r[0].begin(), 16, k.begin());
      return k;
    }());
    const Nonce nonce = parse_nonce(r[1]);
    ASSERT_EQ(to_hex(nonce.bytes()), to_hex(r[1]));
    const CcmOutput out = ccm_encrypt(key, nonce, r[3], r[2]);
    EXPECT_EQ(to_hex(out.ciphertext), to_hex(r[4]));
    EXPECT_EQ(to_hex(out.mic.bytes), to_hex(r[5]));
  }
}

TEST(Ccm, EmptyPlaintextStillProducesMic) {
  const CcmOutput out = ccm_encrypt(kKey, build_nonce(5, 1, 0), {}, {});
  EXPECT_TRUE(out.ciphertext.empty());
  EXPECT_EQ(out.mic.bytes.size(), 4u);
  EXPECT_TRUE(ccm_decrypt(kKey, build_nonce(5, 1, 0), {}, {}, out.mic).has_value());
  Mic bad = out.mic;
  bad.bytes[0] ^= 1;
  EXPECT_FALSE(ccm_decrypt(kKey, build_nonce(5, 1, 0), {}, {}, bad).has_value());
}

TEST(Ccm, RoundTripAllLengths) {
  std::mt19937_64 rng(42);
  for (std::size_t len = 0; len <= kMaxPlaintext; ++len) {
    const Bytes pt = random_bytes(rng, len);
    const Bytes aad = {static_cast<std::uint8_t>(len)};
    const Nonce n = build_nonce(rng(), static_cast<std::uint16_t>(rng()), static_cast<std::uint8_t>(rng()));
    const CcmOutput out = ccm_encrypt(kKey, n, pt, aad);
    ASSERT_EQ(out.ciphertext.size(), pt.size());
    const auto back = ccm_decrypt(kKey, n, out.ciphertext, aad, out.mic);
    ASSERT_TRUE(back.has_value()) << len;
    EXPECT_EQ(*back, pt);
  }
}

TEST(Ccm, RejectsOversizedPlaintext) {
  const Bytes pt(kMaxPlaintext + 1, 0);
  EXPECT_THROW(ccm_encrypt(kKey, Nonce{}, pt, {}), std::length_error);
}

TEST(Ccm, KeystreamReuseLeaksPlaintextXor) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Nonce n = build_nonce(rng(), 2, 3);
    const Bytes p1 = random_bytes(rng, rng() % 252);
    const Bytes p2 = random_bytes(rng, rng() % 252);
    const auto c1 = ccm_encrypt(kKey, n, p1, {}).ciphertext;
    const auto c2 = ccm_encrypt(kKey, n, p2, {}).ciphertext;
    const std::size_t overlap = std::min(p1.size(), p2.size());
    for (std::size_t i = 0; i < overlap; ++i) ASSERT_EQ(c1[i] ^ c2[i], p1[i] ^ p2[i]);
  }
}

TEST(Ccm, EverySingleBitFlipIsRejected) {
  std::mt19937_64 rng(3);
  const Bytes pt = random_bytes(rng, 20);
  const Bytes aad = {20};
  const Nonce n = build_nonce(41, 1, 2);
  const CcmOutput out = ccm_encrypt(kKey, n, pt, aad);

  for (std::size_t bit = 0; bit < out.ciphertext.size() * 8; ++bit) {
    Bytes c = out.ciphertext;
    c[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(ccm_decrypt(kKey, n, c, aad, out.mic).has_value()) << "ciphertext bit " << bit;
  }
  for (std::size_t bit = 0; bit < kMicSize * 8; ++bit) {
    Mic m = out.mic;
    m.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(ccm_decrypt(kKey, n, out.ciphertext, aad, m).has_value()) << "mic bit " << bit;
  }
  for (std::size_t bit = 0; bit < 8; ++bit) {
    Bytes a = aad;
    a[0] ^= static_cast<std::uint8_t>(1u << bit);
    EXPECT_FALSE(ccm_decrypt(kKey, n, out.ciphertext, a, out.mic).has_value()) << "aad bit " << bit;
  }
  // A different nonce is a different keystream and MIC.
  EXPECT_FALSE(ccm_decrypt(kKey, build_nonce(42, 1, 2), out.ciphertext, aad, out.mic).has_value());
}

TEST(Ccm, LatencyBudget) {
  EXPECT_EQ(ccm_latency(CcmMode::kHardware), 80us);
  EXPECT_EQ(ccm_latency(CcmMode::kSoftware), 1556us);
  EXPECT_GT(ccm_latency(CcmMode::kHardware), kRadioRampUp);
}

TEST(NonceLedger, IdenticalPlaintextIsNotReuse) {
  NonceLedger ledger;
  const Bytes p = {1, 2, 3};
  EXPECT_FALSE(ledger.record(kKey, build_nonce(1, 1, 0), p, NonceUse::kUnique));
  EXPECT_FALSE(ledger.record(kKey, build_nonce(1, 1, 0), p, NonceUse::kUnique));
  EXPECT_EQ(ledger.violations(), 0u);
  EXPECT_EQ(ledger.distinct_pairs(), 1u);
}

TEST(NonceLedger, UntaggedReuseThrows) {
  CcmEngine engine;
  engine.seal(kKey, build_nonce(9, 1, 1), Bytes{1}, {}, NonceUse::kUnique);
  EXPECT_THROW(engine.seal(kKey, build_nonce(9, 1, 1), Bytes{2}, {}, NonceUse::kUnique), NonceReuseError);
  // Same nonce under a different key is fine.
  const Key128 other = Key128::derive(5, KeyRole::kDevice);
  EXPECT_NO_THROW(engine.seal(other, build_nonce(9, 1, 1), Bytes{2}, {}, NonceUse::kUnique));
}

TEST(NonceLedger, RecordPolicyCountsViolations) {
  NonceLedger ledger(NonceLedger::Policy::kRecord);
  ledger.record(kKey, build_nonce(9, 1, 1), Bytes{1}, NonceUse::kUnique);
  const auto ev = ledger.record(kKey, build_nonce(9, 1, 1), Bytes{2}, NonceUse::kUnique);
  ASSERT_TRUE(ev);
  EXPECT_EQ(ev->cls, ReuseClass::kViolation);
  EXPECT_TRUE(ev->confidentiality_loss);
  EXPECT_EQ(ledger.violations(), 1u);
}

TEST(NonceLedger, PermittedClassesAreFlagged) {
  NonceLedger ledger;
  ledger.record(kKey, kIndNonce, Bytes{1}, NonceUse::kInd);
  const auto ind = ledger.record(kKey, kIndNonce, Bytes{2}, NonceUse::kInd);
  ASSERT_TRUE(ind);
  EXPECT_EQ(ind->cls, ReuseClass::kIndZeroIv);
  EXPECT_FALSE(ind->confidentiality_loss);

  ledger.record(kKey, build_nonce(3, 2, 0), Bytes{1}, NonceUse::kMp2p);
  const auto mp = ledger.record(kKey, build_nonce(3, 2, 0), Bytes{2}, NonceUse::kMp2p);
  ASSERT_TRUE(mp);
  EXPECT_EQ(mp->cls, ReuseClass::kMp2pSharedNonce);
  EXPECT_TRUE(mp->confidentiality_loss);

  ledger.record(kKey, build_nonce(4, 2, 0), Bytes{1}, NonceUse::kMp2pInnerProtected);
  const auto prot = ledger.record(kKey, build_nonce(4, 2, 0), Bytes{2}, NonceUse::kMp2pInnerProtected);
  ASSERT_TRUE(prot);
  EXPECT_FALSE(prot->confidentiality_loss);

  EXPECT_EQ(ledger.violations(), 0u);
  EXPECT_EQ(ledger.count(ReuseClass::kIndZeroIv), 1u);
  EXPECT_EQ(ledger.count(ReuseClass::kMp2pSharedNonce), 2u);
  EXPECT_EQ(ledger.confidentiality_losses(), 1u);
}
