// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/sim/reception.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "sfsec/sim/rng.hpp"

namespace sfsec::sim {

std::string_view to_string(RxResult r) {
  switch (r) {
    case RxResult::kReceived: return "received";
    case RxResult::kCtIncoherent: return "ct_incoherent";
    case RxResult::kCollisionGarble: return "collision_garble";
    case RxResult::kErased: return "erased";
    case RxResult::kLengthOverrun: return "length_overrun";
    case RxResult::kCrcFail: return "crc_fail";
    case RxResult::kAuthFail: return "auth_fail";
  }
  return "?";
}

RxOutcome resolve_reception(std::span<const Candidate> candidates, const ReceptionParams& params,
                            std::uint64_t rng_key) {
  RxOutcome out;
  // At most a few dozen concurrent transmitters; a fixed buffer avoids allocation.
  constexpr std::size_t kMax = 64;
  std::array<std::uint8_t, kMax> arrived{};
  std::size_t n_arrived = 0;
  for (std::size_t i = 0; i < candidates.size() && n_arrived < kMax; ++i) {
    const auto& c = candidates[i];
    if (c.p_link <= 0.0) continue;
    if (c.p_link < 1.0 && unit_from(mix64(rng_key ^ mix64(c.tx_id + 0x7478))) >= c.p_link) continue;
    arrived[n_arrived++] = static_cast<std::uint8_t>(i);
  }
  if (n_arrived == 0) return out;

  // Strongest arrival decides which frame the receiver would lock onto.
  std::size_t best = arrived[0];
  for (std::size_t k = 1; k < n_arrived; ++k)
    if (candidates[arrived[k]].p_link > candidates[best].p_link) best = arrived[k];
  const std::uint64_t fp = candidates[best].fingerprint;

  double competitor = -1.0;
  for (std::size_t k = 0; k < n_arrived; ++k) {
    const auto& c = candidates[arrived[k]];
    if (c.fingerprint != fp) competitor = std::max(competitor, c.p_link);
  }
  if (competitor >= 0.0) {
    const bool capture = params.capture_margin >= 0.0 && candidates[best].p_link - competitor > params.capture_margin;
    if (!capture) {
      out.result = RxResult::kCollisionGarble;
      return out;
    }
  }

  SimTime lo = SimTime::max();
  SimTime hi = SimTime::min();
  for (std::size_t k = 0; k < n_arrived; ++k) {
    const auto& c = candidates[arrived[k]];
    if (c.fingerprint != fp) continue;
    lo = std::min(lo, c.start);
    hi = std::max(hi, c.start);
  }
  out.chosen = static_cast<int>(best);
  out.rx_time = lo;
  out.result = (hi - lo) >= params.coherence ? RxResult::kCtIncoherent : RxResult::kReceived;
  return out;
}

double ct_success_probability(std::span<const double> p_links) {
  double miss = 1.0;
  for (double p : p_links) miss *= 1.0 - p;
  return 1.0 - miss;
}

namespace {

double byte_error_probability(double ber) { return -std::expm1(8.0 * std::log1p(-ber)); }

}  // namespace

std::size_t first_error_byte(double ber, std::uint64_t rng_key, std::size_t limit) {
  if (ber <= 0.0) return std::numeric_limits<std::size_t>::max();
  SplitMix64 rng(rng_key);
  const std::uint64_t gap = geometric_gap(rng.uniform(), byte_error_probability(ber));
  return gap < limit ? static_cast<std::size_t>(gap) : std::numeric_limits<std::size_t>::max();
}

std::uint32_t apply_bit_errors(std::span<std::uint8_t> frame, double ber, std::uint64_t rng_key) {
  if (ber <= 0.0) return 0;
  const double pb = byte_error_probability(ber);
  SplitMix64 rng(rng_key);
  std::uint32_t flipped = 0;
  std::uint64_t pos = geometric_gap(rng.uniform(), pb);
  while (pos < frame.size()) {
    // Given the byte is hit, flip each bit with ber, forcing at least one.
    std::uint8_t mask = 0;
    for (int b = 0; b < 8; ++b)
      if (rng.uniform() < ber) mask |= static_cast<std::uint8_t>(1u << b);
    if (mask == 0) mask = static_cast<std::uint8_t>(1u << rng.below(8));
    frame[pos] ^= mask;
    flipped += static_cast<std::uint32_t>(__builtin_popcount(mask));
    const std::uint64_t gap = geometric_gap(rng.uniform(), pb);
    if (gap >= frame.size()) break;
    pos += 1 + gap;
  }
  return flipped;
}

}  // namespace sfsec::sim
