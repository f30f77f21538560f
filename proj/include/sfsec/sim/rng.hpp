// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include "sfsec/common/mix.hpp"

namespace sfsec::sim {

/// Sequential splitmix64 stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return unit_from(next()); }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Counter-based draws: the value depends only on the key words, not on how
/// many draws came before. Runs that differ only in frame length or BER see
/// the same link coins (common random numbers).
class KeyedRng {
 public:
  explicit KeyedRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t key(std::initializer_list<std::uint64_t> words) const {
    std::uint64_t h = mix64(seed_ ^ 0x6b657965642d726eULL);
    for (auto w : words) h = mix64(h ^ w);
    return h;
  }
  double uniform(std::initializer_list<std::uint64_t> words) const { return unit_from(key(words)); }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Number of failures before the first success of a Bernoulli(p) process,
/// drawn by inversion from u in [0, 1).
inline std::uint64_t geometric_gap(double u, double p) {
  if (p <= 0.0) return UINT64_MAX;
  if (p >= 1.0) return 0;
  const double g = std::floor(std::log1p(-u) / std::log1p(-p));
  return g >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(g);
}

}  // namespace sfsec::sim
