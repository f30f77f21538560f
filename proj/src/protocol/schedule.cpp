// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/protocol/schedule.hpp"

#include <sstream>

#include "sfsec/crypto/ccm.hpp"
#include "sfsec/protocol/pdu.hpp"

namespace sfsec::protocol {

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::kP2P: return "P2P";
    case Pattern::kP2MP: return "P2MP";
    case Pattern::kMP2P: return "MP2P";
  }
  return "?";
}

std::optional<Pattern> parse_pattern(std::string_view name) {
  if (name == "P2P") return Pattern::kP2P;
  if (name == "P2MP") return Pattern::kP2MP;
  if (name == "MP2P") return Pattern::kMP2P;
  return std::nullopt;
}

std::string_view to_string(SecurityMode m) {
  switch (m) {
    case SecurityMode::kOff: return "off";
    case SecurityMode::kOn: return "on";
    case SecurityMode::kOnDeviceKeys: return "on+device_keys";
  }
  return "?";
}

std::optional<SecurityMode> parse_security(std::string_view name) {
  if (name == "off") return SecurityMode::kOff;
  if (name == "on") return SecurityMode::kOn;
  if (name == "on+device_keys" || name == "on_device_keys") return SecurityMode::kOnDeviceKeys;
  return std::nullopt;
}

void PhaseSpec::validate() const {
  if (initiators.empty()) throw std::invalid_argument("phase has no initiator");
  if (pattern != Pattern::kMP2P && initiators.size() != 1)
    throw std::invalid_argument(std::string(to_string(pattern)) + " phase needs exactly one initiator");
  if (pattern == Pattern::kP2P && !target) throw std::invalid_argument("P2P phase needs a target");
  if (max_hops == 0) throw std::invalid_argument("max_hops must be positive");
  if (slot_count == 0) throw std::invalid_argument("slot_count must be positive");
}

std::size_t body_bytes(const PhaseSpec& spec, SecurityMode mode, bool is_ind) {
  if (is_ind) return kIndBodySize;
  return spec.payload_len + (mode == SecurityMode::kOnDeviceKeys ? crypto::kMicSize : 0);
}

EpochSchedule::EpochSchedule(Duration interval, PhaseSpec ind, std::vector<PhaseSpec> data) : interval_(interval) {
  if (interval <= Duration{0}) throw std::invalid_argument("epoch interval must be positive");
  ind.payload_len = kIndBodySize;
  phases_.clear();
  phases_.push_back(std::move(ind));
  for (auto& p : data) phases_.push_back(std::move(p));
  if (phases_.size() > 0xffff) throw std::invalid_argument("too many phases");
  for (const auto& p : phases_) p.validate();
}

std::vector<PhaseTiming> EpochSchedule::timings(const framing::Phy& phy, SecurityMode mode,
                                                const TimingParams& params) const {
  std::vector<PhaseTiming> out;
  out.reserve(phases_.size());
  Duration cursor = params.epoch_lead;
  for (std::size_t i = 0; i < phases_.size(); ++i) {
    const auto& spec = phases_[i];
    const std::size_t pdu_len = kPduHeaderSize + body_bytes(spec, mode, i == 0);
    if (pdu_len > framing::kMaxPayload) throw framing::PayloadTooLarge(pdu_len);
    PhaseTiming t;
    t.start = cursor;
    t.max_packet_length = static_cast<std::uint16_t>(pdu_len);
    t.format = mode == SecurityMode::kOff ? framing::FrameFormat::plain(static_cast<std::uint8_t>(pdu_len))
                                          : framing::FrameFormat::secure();
    t.frame_bytes = framing::frame_size(pdu_len, t.format);
    t.airtime = framing::airtime(t.frame_bytes, phy);
    t.airtime_est = t.airtime + params.airtime_error;
    t.hop = t.airtime + params.hop_gap;
    t.hop_est = t.airtime_est + params.hop_gap;
    t.slots = spec.max_hops;
    cursor = t.end() + params.phase_gap;
    out.push_back(t);
  }
  if (cursor > interval_) {
    std::ostringstream msg;
    msg << "phases need " << cursor.count() / 1000 << " us but the epoch is " << interval_.count() / 1000 << " us";
    throw EpochOverrun(msg.str());
  }
  return out;
}

}  // namespace sfsec::protocol
