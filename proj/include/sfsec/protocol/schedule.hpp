// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sfsec/common/time.hpp"
#include "sfsec/framing/frame.hpp"
#include "sfsec/framing/phy.hpp"

namespace sfsec::protocol {

enum class Pattern : std::uint8_t { kP2P, kP2MP, kMP2P };

std::string_view to_string(Pattern p);
std::optional<Pattern> parse_pattern(std::string_view name);

/// off: plain Atomic with fixed-length frames. on: network-key CCM on every
/// flood. on_device_keys: on, plus a device-key inner layer on data floods.
enum class SecurityMode : std::uint8_t { kOff, kOn, kOnDeviceKeys };

std::string_view to_string(SecurityMode m);
std::optional<SecurityMode> parse_security(std::string_view name);

struct PhaseSpec {
  Pattern pattern = Pattern::kP2MP;
  std::vector<std::uint8_t> initiators;
  std::optional<std::uint8_t> target;
  /// Application payload bytes (the IND body for the IND phase).
  std::uint16_t payload_len = 0;
  /// Number of relay slots in the phase.
  std::uint8_t max_hops = 6;
  /// Transmissions per node after its first reception.
  std::uint8_t slot_count = 3;

  /// Throws std::invalid_argument when the initiator count does not fit the pattern.
  void validate() const;
};

class EpochOverrun : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derived timing for one phase, relative to the epoch start.
struct PhaseTiming {
  Duration start{};
  std::size_t frame_bytes = 0;
  std::uint16_t max_packet_length = 0;
  framing::FrameFormat format;
  /// True on-air duration of the frame.
  Duration airtime{};
  /// Duration every node assumes, including any configured constant error.
  Duration airtime_est{};
  Duration hop{};
  Duration hop_est{};
  std::uint8_t slots = 0;

  Duration slot_offset(std::uint8_t slot) const { return start + hop_est * slot; }
  Duration end() const { return start + hop_est * slots; }
};

struct TimingParams {
  /// Turnaround between the end of one hop's frame and the next hop's start.
  Duration hop_gap = 150us;
  /// Idle time between consecutive phases.
  Duration phase_gap = 500us;
  /// Time from the epoch boundary to the IND.
  Duration epoch_lead = 1ms;
  /// Error in the airtime constant the nodes believe in (per hop).
  Duration airtime_error{0};
};

/// Epoch layout: the IND phase is always first, then the data phases.
class EpochSchedule {
 public:
  EpochSchedule() = default;
  EpochSchedule(Duration interval, PhaseSpec ind, std::vector<PhaseSpec> data);

  Duration interval() const { return interval_; }
  const PhaseSpec& ind() const { return phases_.front(); }
  const std::vector<PhaseSpec>& phases() const { return phases_; }
  std::size_t data_phase_count() const { return phases_.size() - 1; }

  /// Per-phase timing for a PHY. Throws EpochOverrun if the phases do not fit.
  std::vector<PhaseTiming> timings(const framing::Phy& phy, SecurityMode mode, const TimingParams& params) const;

 private:
  Duration interval_ = 500ms;
  std::vector<PhaseSpec> phases_{PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 6, 3}};
};

/// Bytes of application body a data phase carries on air, including the inner
/// device-key MIC when that layer is on.
std::size_t body_bytes(const PhaseSpec& spec, SecurityMode mode, bool is_ind);

}  // namespace sfsec::protocol
