// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "sfsec/common/time.hpp"

namespace sfsec::sim {

/// Linear oscillator model in integer nanoseconds:
///   local(t) = t + offset + trunc(drift_ppb * (t - last_sync) / 1e9)
/// Drift is kept in parts per billion so that the model is exact.
class ClockModel {
 public:
  ClockModel() = default;
  ClockModel(std::int64_t drift_ppb, Duration offset) : drift_ppb_(drift_ppb), offset_(offset) {}
  static ClockModel from_ppm(double drift_ppm, Duration offset = Duration{0});

  /// Local reading at true time t.
  LocalTime local(SimTime t) const;
  /// Drift accumulated since the last sync.
  Duration accumulated(SimTime t) const;
  /// Earliest true time at which the clock reads l.
  SimTime to_true(LocalTime l) const;

  /// Restarts drift accumulation at t without changing the reading at t.
  void resync(SimTime t);
  /// Forces local(t) == l and restarts accumulation at t.
  void set(SimTime t, LocalTime l);

  std::int64_t drift_ppb() const { return drift_ppb_; }
  double drift_ppm() const { return static_cast<double>(drift_ppb_) / 1000.0; }
  Duration offset() const { return offset_; }
  SimTime last_sync() const { return last_sync_; }

 private:
  std::int64_t drift_ppb_ = 0;
  Duration offset_{0};
  SimTime last_sync_{0};
};

}  // namespace sfsec::sim
