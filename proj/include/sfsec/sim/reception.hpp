// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "sfsec/common/bytes.hpp"
#include "sfsec/common/time.hpp"

namespace sfsec::sim {

enum class RxResult : std::uint8_t {
  kReceived,
  kCtIncoherent,
  kCollisionGarble,
  kErased,
  kLengthOverrun,
  kCrcFail,
  kAuthFail,
};

inline constexpr std::size_t kRxResultCount = 7;

std::string_view to_string(RxResult r);

struct RxOutcome {
  RxResult result = RxResult::kErased;
  SimTime rx_time{};
  std::uint32_t bits_corrupted = 0;
  /// Index into the candidate list of the frame that was locked onto.
  int chosen = -1;
};

/// A transmission overlapping the receiver's window on its channel.
struct Candidate {
  SimTime start{};
  std::uint64_t fingerprint = 0;
  double p_link = 0.0;
  /// Identifies the transmitter in the link-coin key.
  std::uint64_t tx_id = 0;
};

struct ReceptionParams {
  /// Concurrent copies of one frame are coherent iff their start times are
  /// within this bound.
  Duration coherence = 500ns;
  /// Differing frames: the strongest link wins if it beats the best competing
  /// frame by more than this. Negative disables capture (always garble).
  double capture_margin = -1.0;
};

/// Link-level decision for one receive window. Each candidate arrives
/// independently with its p_link (coin keyed by rng_key and tx_id). Among
/// the arrivals: differing bytes garble unless capture applies; identical
/// bytes spread by coherence or more are incoherent; otherwise received.
/// No arrival at all is kErased. Bit errors are applied separately.
RxOutcome resolve_reception(std::span<const Candidate> candidates, const ReceptionParams& params,
                            std::uint64_t rng_key);

/// 1 - prod(1 - p_i): CT success probability of coherent copies.
double ct_success_probability(std::span<const double> p_links);

/// Flips bits of `frame` as a memoryless channel with bit error rate `ber`
/// would, drawing from a stream keyed by rng_key. Returns the number of
/// flipped bits. Byte positions follow a geometric gap process, so the draw
/// for byte i does not depend on the frame length beyond i.
std::uint32_t apply_bit_errors(std::span<std::uint8_t> frame, double ber, std::uint64_t rng_key);

/// Position of the first corrupted byte under the same process, or SIZE_MAX.
std::size_t first_error_byte(double ber, std::uint64_t rng_key, std::size_t limit);

}  // namespace sfsec::sim
