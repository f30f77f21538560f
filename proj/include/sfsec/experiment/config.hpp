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
#include "sfsec/crypto/ccm.hpp"
#include "sfsec/framing/phy.hpp"
#include "sfsec/protocol/schedule.hpp"
#include "sfsec/sim/link_model.hpp"
#include "sfsec/sim/topology.hpp"

namespace sfsec::experiment {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TopologyRef {
  /// "line", "grid", "disk" or "file".
  std::string kind = "line";
  std::size_t nodes = 20;
  std::size_t rows = 4;
  std::size_t cols = 5;
  double spacing_m = 150.0;
  double radius_m = 600.0;
  std::string path;

  sim::Topology build(std::uint64_t seed) const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  TopologyRef topology;
  std::uint8_t source = 0;
  std::vector<framing::PhyMode> phys{framing::kAllPhys.begin(), framing::kAllPhys.end()};
  std::vector<std::uint16_t> payloads{20, 50, 100, 200};
  std::vector<protocol::SecurityMode> encryption{protocol::SecurityMode::kOff, protocol::SecurityMode::kOn};
  Duration epoch_interval = 500ms;
  Duration duration = 300s;
  Duration paper_duration = 3000s;
  std::uint32_t repeats = 10;
  std::uint64_t seed = 1;

  std::uint8_t max_hops = 22;
  std::uint8_t slot_count = 3;
  std::uint8_t ind_max_hops = 22;
  std::uint8_t ind_slot_count = 3;
  /// Data phases per epoch, all P2MP from the source.
  std::uint16_t data_phases = 1;

  sim::LinkParams link;
  double drift_ppm_max = 20.0;
  bool resync_per_hop = true;
  Duration rx_guard = 50us;
  /// Added to every node's airtime estimate.
  Duration airtime_error{0};
  crypto::CcmMode ccm_mode = crypto::CcmMode::kHardware;
  double capture_margin = -1.0;
  std::optional<std::string> phy_table_path;

  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws ConfigError.
  void validate() const;
  std::uint64_t epochs(bool paper_scale = false) const;
  std::size_t cell_count() const;

  /// Resolves relative paths against base_dir.
  static ExperimentConfig from_json(std::string_view text, const std::string& base_dir = ".");
  static ExperimentConfig load(const std::string& path);
  std::string to_json() const;
};

}  // namespace sfsec::experiment
