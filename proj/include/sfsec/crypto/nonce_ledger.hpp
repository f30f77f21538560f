// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "sfsec/common/bytes.hpp"
#include "sfsec/crypto/ccm.hpp"
#include "sfsec/crypto/key.hpp"
#include "sfsec/crypto/nonce.hpp"

namespace sfsec::crypto {

/// Why the caller is encrypting. Only the tagged classes may legitimately meet
/// an earlier (key, nonce) with a different plaintext.
enum class NonceUse : std::uint8_t {
  kUnique,             // P2P/P2MP data, device-key inner layer
  kInd,                // constant zero IV so joiners can decode the IND
  kMp2p,               // concurrent MP2P initiators share the counters
  kMp2pInnerProtected, // as kMp2p, but payloads carry a device-key inner layer
};

enum class ReuseClass : std::uint8_t { kIndZeroIv, kMp2pSharedNonce, kViolation };

const char* to_string(ReuseClass c);

struct ReuseEvent {
  KeyRole key_role;
  Nonce nonce;
  NonceUse use;
  ReuseClass cls;
  /// Keystream reuse across distinct plaintexts that nothing else protects.
  bool confidentiality_loss;
};

class NonceReuseError : public std::logic_error {
 public:
  explicit NonceReuseError(const ReuseEvent& e);
  const ReuseEvent& event() const { return event_; }

 private:
  ReuseEvent event_;
};

/// Tracks every (key, nonce) -> plaintext fingerprint handed to the cipher and
/// classifies collisions. One ledger per simulation engine.
class NonceLedger {
 public:
  enum class Policy { kThrow, kRecord };

  explicit NonceLedger(Policy policy = Policy::kThrow) : policy_(policy) {}

  /// Returns the reuse event if this (key, nonce) was already used with a
  /// different plaintext. Throws NonceReuseError for an untagged reuse under
  /// Policy::kThrow.
  std::optional<ReuseEvent> record(const Key128& key, const Nonce& nonce, ByteView plaintext, NonceUse use);

  std::uint64_t count(ReuseClass c) const;
  std::uint64_t violations() const { return count(ReuseClass::kViolation); }
  std::uint64_t confidentiality_losses() const { return confidentiality_losses_; }
  std::size_t distinct_pairs() const { return entries_.size(); }

  /// First few events of each class, for diagnostics.
  const std::vector<ReuseEvent>& samples() const { return samples_; }

 private:
  struct PairKey {
    std::array<std::uint8_t, 16> key;
    KeyRole role;
    Nonce nonce;
    friend bool operator==(const PairKey&, const PairKey&) = default;
  };
  struct PairHash {
    std::size_t operator()(const PairKey& k) const noexcept;
  };

  Policy policy_;
  std::unordered_map<PairKey, std::uint64_t, PairHash> entries_;
  std::map<ReuseClass, std::uint64_t> counts_;
  std::uint64_t confidentiality_losses_ = 0;
  std::vector<ReuseEvent> samples_;
};

/// CCM bound to a ledger: every seal goes through the nonce bookkeeping.
class CcmEngine {
 public:
  explicit CcmEngine(NonceLedger::Policy policy = NonceLedger::Policy::kThrow) : ledger_(policy) {}

  CcmOutput seal(const Key128& key, const Nonce& nonce, ByteView plaintext, ByteView aad, NonceUse use);
  std::optional<Bytes> open(const Key128& key, const Nonce& nonce, ByteView ciphertext, ByteView aad,
                            const Mic& mic) const {
    return ccm_decrypt(key, nonce, ciphertext, aad, mic);
  }

  const NonceLedger& ledger() const { return ledger_; }

 private:
  NonceLedger ledger_;
};

}  // namespace sfsec::crypto
