// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/crypto/nonce_ledger.hpp"

#include <string>

namespace sfsec::crypto {

namespace {

constexpr std::size_t kSamplesPerClass = 8;

ReuseClass classify(NonceUse use) {
  switch (use) {
    case NonceUse::kInd:
      return ReuseClass::kIndZeroIv;
    case NonceUse::kMp2p:
    case NonceUse::kMp2pInnerProtected:
      return ReuseClass::kMp2pSharedNonce;
    case NonceUse::kUnique:
      break;
  }
  return ReuseClass::kViolation;
}

std::string describe(const ReuseEvent& e) {
  return std::string("nonce reuse (") + to_string(e.cls) + ") at EC=" + std::to_string(e.nonce.epoch_counter) +
         " PC=" + std::to_string(e.nonce.phase_counter) + " RC=" + std::to_string(e.nonce.relay_counter);
}

}  // namespace

const char* to_string(ReuseClass c) {
  switch (c) {
    case ReuseClass::kIndZeroIv:
      return "ind_zero_iv";
    case ReuseClass::kMp2pSharedNonce:
      return "mp2p_shared_nonce";
    case ReuseClass::kViolation:
      return "violation";
  }
  return "?";
}

NonceReuseError::NonceReuseError(const ReuseEvent& e) : std::logic_error(describe(e)), event_(e) {}

std::size_t NonceLedger::PairHash::operator()(const PairKey& k) const noexcept {
  std::uint64_t h = fingerprint(k.key);
  h ^= k.nonce.epoch_counter * 0x9e3779b97f4a7c15ULL;
  h ^= (static_cast<std::uint64_t>(k.nonce.phase_counter) << 16 | k.nonce.relay_counter << 8 |
        static_cast<std::uint64_t>(k.role)) *
       0xc2b2ae3d27d4eb4fULL;
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::optional<ReuseEvent> NonceLedger::record(const Key128& key, const Nonce& nonce, ByteView plaintext, NonceUse use) {
  const std::uint64_t fp = fingerprint(plaintext);
  auto [it, inserted] = entries_.try_emplace(PairKey{key.bytes(), key.role(), nonce}, fp);
  if (inserted || it->second == fp) return std::nullopt;
  it->second = fp;

  ReuseEvent ev{key.role(), nonce, use, classify(use), false};
  ev.confidentiality_loss = ev.cls == ReuseClass::kViolation || use == NonceUse::kMp2p;
  if (ev.confidentiality_loss) ++confidentiality_losses_;
  auto& n = counts_[ev.cls];
  if (n++ < kSamplesPerClass) samples_.push_back(ev);
  if (ev.cls == ReuseClass::kViolation && policy_ == Policy::kThrow) throw NonceReuseError(ev);
  return ev;
}

std::uint64_t NonceLedger::count(ReuseClass c) const {
  auto it = counts_.find(c);
  return it == counts_.end() ? 0 : it->second;
}

CcmOutput CcmEngine::seal(const Key128& key, const Nonce& nonce, ByteView plaintext, ByteView aad, NonceUse use) {
  ledger_.record(key, nonce, plaintext, use);
  return ccm_encrypt(key, nonce, plaintext, aad);
}

}  // namespace sfsec::crypto
