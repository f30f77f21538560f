// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sfsec/common/time.hpp"

namespace sfsec::framing {

enum class PhyMode : std::uint8_t { k125Kbps, k500Kbps, k1Mbps, k2Mbps };

inline constexpr std::array<PhyMode, 4> kAllPhys = {PhyMode::k125Kbps, PhyMode::k500Kbps, PhyMode::k1Mbps,
                                                    PhyMode::k2Mbps};

std::string_view to_string(PhyMode mode);
std::optional<PhyMode> parse_phy(std::string_view name);
std::uint32_t bitrate_bps(PhyMode mode);
/// Coded PHYs spread each bit over several symbols (S=8 at 125 kbps, S=2 at 500 kbps).
bool is_coded(PhyMode mode);

/// Timing constants for one PHY. A frame of n bytes occupies
/// preamble_overhead + n * per_byte_time on air.
struct Phy {
  PhyMode mode = PhyMode::k1Mbps;
  Duration preamble_overhead{};
  Duration per_byte_time{};
  std::uint8_t crc_bytes = 3;
};

/// Largest serialized frame: length byte + 251 payload + 4 MIC + 3 CRC, rounded
/// up to the 255+5 bound.
inline constexpr std::size_t kMaxFrameBytes = 260;

/// Throws std::out_of_range when frame_len_bytes exceeds kMaxFrameBytes.
Duration airtime(std::size_t frame_len_bytes, const Phy& phy);

/// Per-PHY timing constants. The defaults follow BLE 5 PHY arithmetic (preamble,
/// access address, coding indicator and terminators folded into the constant);
/// measured values can be loaded from a JSON table keyed by PHY name:
///   {"2M": {"preamble_us": 24, "per_byte_us": 4, "crc_bytes": 3}, ...}
class PhyTable {
 public:
  static PhyTable defaults();
  static PhyTable from_json(std::string_view text);
  static PhyTable load(const std::string& path);

  const Phy& get(PhyMode mode) const { return phys_[static_cast<std::size_t>(mode)]; }
  void set(const Phy& phy) { phys_[static_cast<std::size_t>(phy.mode)] = phy; }

  std::string to_json() const;

 private:
  std::array<Phy, 4> phys_{};
};

}  // namespace sfsec::framing
