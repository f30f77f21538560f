// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/sim/clock.hpp"

#include <cmath>

namespace sfsec::sim {

namespace {

std::int64_t scaled(std::int64_t ppb, std::int64_t ns) {
  // __int128 keeps drift * elapsed exact; division truncates toward zero.
  return static_cast<std::int64_t>(static_cast<__int128>(ppb) * ns / 1'000'000'000);
}

}  // namespace

ClockModel ClockModel::from_ppm(double drift_ppm, Duration offset) {
  return ClockModel(static_cast<std::int64_t>(std::llround(drift_ppm * 1000.0)), offset);
}

LocalTime ClockModel::local(SimTime t) const {
  return LocalTime{t.count() + offset_.count() + scaled(drift_ppb_, (t - last_sync_).count())};
}

Duration ClockModel::accumulated(SimTime t) const { return Duration{scaled(drift_ppb_, (t - last_sync_).count())}; }

SimTime ClockModel::to_true(LocalTime l) const {
  const std::int64_t base = l.ns - offset_.count();
  SimTime t{base - scaled(drift_ppb_, base - last_sync_.count())};
  // Truncation can leave the first-order inverse a nanosecond off; settle on
  // the earliest t whose reading reaches l.
  while (local(t) < l) t += Duration{1};
  while (local(t - Duration{1}) >= l) t -= Duration{1};
  return t;
}

void ClockModel::resync(SimTime t) {
  offset_ += accumulated(t);
  last_sync_ = t;
}

void ClockModel::set(SimTime t, LocalTime l) {
  offset_ = Duration{l.ns - t.count()};
  last_sync_ = t;
}

}  // namespace sfsec::sim
