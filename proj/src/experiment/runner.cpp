// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "sfsec/common/mix.hpp"
#include "sfsec/experiment/stats.hpp"

namespace sfsec::experiment {

std::vector<Cell> matrix(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  cells.reserve(config.cell_count());
  for (auto phy : config.phys)
    for (auto payload : config.payloads)
      for (auto enc : config.encryption)
        for (std::uint32_t r = 0; r < config.repeats; ++r) cells.push_back({phy, payload, enc, r});
  return cells;
}

std::uint64_t cell_seed(const ExperimentConfig& config, std::uint32_t repeat) {
  return hash_words({config.seed, repeat, 0xce11});
}

sim::SimConfig sim_config(const ExperimentConfig& config, const Cell& cell, bool paper_scale) {
  using protocol::PhaseSpec;
  using protocol::Pattern;
  sim::SimConfig c;
  c.topology = config.topology.build(config.seed);
  c.link = config.link;
  if (config.phy_table_path) c.phy_table = framing::PhyTable::load(*config.phy_table_path);
  c.phy = cell.phy;
  c.security = cell.encryption;
  const PhaseSpec ind{Pattern::kP2MP, {config.source}, std::nullopt, 9, config.ind_max_hops, config.ind_slot_count};
  const PhaseSpec data{Pattern::kP2MP, {config.source}, std::nullopt, cell.payload, config.max_hops,
                       config.slot_count};
  c.schedule = protocol::EpochSchedule(config.epoch_interval, ind, std::vector<PhaseSpec>(config.data_phases, data));
  c.timing.airtime_error = config.airtime_error;
  c.epochs = config.epochs(paper_scale);
  c.seed = cell_seed(config, cell.repeat);
  c.drift_ppm_max = config.drift_ppm_max;
  c.resync_per_hop = config.resync_per_hop;
  c.rx_guard = config.rx_guard;
  c.ccm_mode = config.ccm_mode;
  c.reception.capture_margin = config.capture_margin;
  return c;
}

namespace {

std::string run_id(const Cell& cell) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-%u-%s-r%02u", std::string(framing::to_string(cell.phy)).c_str(),
                static_cast<unsigned>(cell.payload), std::string(protocol::to_string(cell.encryption)).c_str(),
                static_cast<unsigned>(cell.repeat));
  return buf;
}

}  // namespace

RunResult run_cell(const ExperimentConfig& config, const Cell& cell, bool paper_scale) {
  const auto sc = sim_config(config, cell, paper_scale);
  sim::Engine engine(sc);
  const auto hops = engine.links().hop_distances(sc.topology.index_of(config.source), 0.5);
  const auto sim = engine.run();

  RunResult r;
  r.run_id = run_id(cell);
  r.seed = sc.seed;
  r.cell = cell;
  r.epochs = sc.epochs;
  r.outcome_histogram = sim.outcome_histogram;
  std::vector<double> pers;
  for (const auto& n : sim.nodes) {
    if (n.role != sim::NodeRole::kHonest) continue;
    NodeOutcome o{n.id, hops[sc.topology.index_of(n.id)], n.expected, n.delivered};
    if (n.id != config.source) pers.push_back(o.per());
    r.nodes.push_back(o);
  }
  if (!pers.empty()) r.per_quartiles = quartiles(pers);
  return r;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto cells = matrix(config);
  // Surface schedule problems before any work is spread over threads.
  for (auto phy : config.phys)
    for (auto payload : config.payloads)
      for (auto enc : config.encryption) {
        const auto sc = sim_config(config, {phy, payload, enc, 0}, options.paper_scale);
        (void)sc.schedule.timings(sc.phy_table.get(phy), enc, sc.timing);
      }

  std::vector<RunResult> results(cells.size());
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = run_cell(config, cells[i], options.paper_scale);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        next = cells.size();
        return;
      }
      std::lock_guard lock(mu);
      ++done;
      if (options.progress) options.progress(results[i], done, cells.size());
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace sfsec::experiment
