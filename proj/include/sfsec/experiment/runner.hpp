// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sfsec/experiment/config.hpp"
#include "sfsec/sim/engine.hpp"

namespace sfsec::experiment {

struct Cell {
  framing::PhyMode phy = framing::PhyMode::k1Mbps;
  std::uint16_t payload = 20;
  protocol::SecurityMode encryption = protocol::SecurityMode::kOff;
  std::uint32_t repeat = 0;
};

struct NodeOutcome {
  std::uint8_t node_id = 0;
  int hops_from_source = -1;
  std::uint64_t expected = 0;
  std::uint64_t delivered = 0;

  double per() const { return expected == 0 ? 0.0 : 1.0 - static_cast<double>(delivered) / expected; }
};

struct RunResult {
  std::string run_id;
  /// Shared by every cell with the same repeat index.
  std::uint64_t seed = 0;
  Cell cell;
  std::uint64_t epochs = 0;
  std::vector<NodeOutcome> nodes;
  /// Over receiving nodes (source excluded).
  std::array<double, 3> per_quartiles{};
  std::array<std::uint64_t, sim::kRxResultCount> outcome_histogram{};
};

struct RunOptions {
  bool paper_scale = false;
  /// Called after each finished run, from the worker thread, serialized.
  std::function<void(const RunResult&, std::size_t done, std::size_t total)> progress;
};

/// Matrix order: phy, payload, encryption, repeat.
std::vector<Cell> matrix(const ExperimentConfig& config);
std::uint64_t cell_seed(const ExperimentConfig& config, std::uint32_t repeat);
sim::SimConfig sim_config(const ExperimentConfig& config, const Cell& cell, bool paper_scale = false);
RunResult run_cell(const ExperimentConfig& config, const Cell& cell, bool paper_scale = false);

/// Validates first, then runs every cell; results come back in matrix order.
std::vector<RunResult> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace sfsec::experiment
