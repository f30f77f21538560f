// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/framing/phy.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sfsec::framing {

std::string_view to_string(PhyMode mode) {
  switch (mode) {
    case PhyMode::k125Kbps:
      return "125k";
    case PhyMode::k500Kbps:
      return "500k";
    case PhyMode::k1Mbps:
      return "1M";
    case PhyMode::k2Mbps:
      return "2M";
  }
  return "?";
}

std::optional<PhyMode> parse_phy(std::string_view name) {
  for (auto m : kAllPhys)
    if (to_string(m) == name) return m;
  if (name == "125kbps" || name == "125K") return PhyMode::k125Kbps;
  if (name == "500kbps" || name == "500K") return PhyMode::k500Kbps;
  if (name == "1Mbps" || name == "1m") return PhyMode::k1Mbps;
  if (name == "2Mbps" || name == "2m") return PhyMode::k2Mbps;
  return std::nullopt;
}

std::uint32_t bitrate_bps(PhyMode mode) {
  switch (mode) {
    case PhyMode::k125Kbps:
      return 125'000;
    case PhyMode::k500Kbps:
      return 500'000;
    case PhyMode::k1Mbps:
      return 1'000'000;
    case PhyMode::k2Mbps:
      return 2'000'000;
  }
  return 0;
}

bool is_coded(PhyMode mode) { return mode == PhyMode::k125Kbps || mode == PhyMode::k500Kbps; }

Duration airtime(std::size_t frame_len_bytes, const Phy& phy) {
  if (frame_len_bytes > kMaxFrameBytes) throw std::out_of_range("airtime: frame longer than 260 bytes");
  return phy.preamble_overhead + phy.per_byte_time * static_cast<std::int64_t>(frame_len_bytes);
}

PhyTable PhyTable::defaults() {
  PhyTable t;
  // LE Coded: 80 us preamble + 256 us access address + 16 us CI + 24 us TERM1,
  // plus TERM2 (24 us at S=8, 6 us at S=2).
  t.set({PhyMode::k125Kbps, 400us, 64us, 3});
  t.set({PhyMode::k500Kbps, 382us, 16us, 3});
  // Uncoded: preamble + 4-byte access address.
  t.set({PhyMode::k1Mbps, 40us, 8us, 3});
  t.set({PhyMode::k2Mbps, 24us, 4us, 3});
  return t;
}

namespace {

Duration micros(double us) { return Duration{static_cast<std::int64_t>(std::llround(us * 1000.0))}; }

}  // namespace

PhyTable PhyTable::from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  PhyTable t = defaults();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto mode = parse_phy(it.key());
    if (!mode) throw std::invalid_argument("phy table: unknown PHY '" + it.key() + "'");
    Phy p;
    p.mode = *mode;
    p.preamble_overhead = micros(it.value().at("preamble_us").get<double>());
    p.per_byte_time = micros(it.value().at("per_byte_us").get<double>());
    p.crc_bytes = it.value().value("crc_bytes", 3);
    if (p.per_byte_time <= Duration::zero()) throw std::invalid_argument("phy table: per_byte_us must be positive");
    if (p.preamble_overhead < Duration::zero()) throw std::invalid_argument("phy table: negative preamble_us");
    if (p.crc_bytes != 3) throw std::invalid_argument("phy table: only 3-byte CRC frames are supported");
    t.set(p);
  }
  return t;
}

PhyTable PhyTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("phy table: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string PhyTable::to_json() const {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& p : phys_) {
    doc[std::string(to_string(p.mode))] = {{"preamble_us", p.preamble_overhead.count() / 1000.0},
                                          {"per_byte_us", p.per_byte_time.count() / 1000.0},
                                          {"crc_bytes", p.crc_bytes}};
  }
  return doc.dump(2);
}

}  // namespace sfsec::framing
