// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: run experiment matrices, attack scenarios, and
// encrypted/unencrypted comparisons.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfsec/adversary/scenario.hpp"
#include "sfsec/experiment/compare.hpp"
#include "sfsec/experiment/config.hpp"
#include "sfsec/experiment/export.hpp"
#include "sfsec/experiment/runner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sfsec;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kMismatch = 2;

int cmd_run(const std::string& config_path, const std::string& out, std::optional<std::uint64_t> seed,
            bool paper_scale, std::optional<unsigned> threads, bool quiet) {
  auto config = experiment::ExperimentConfig::load(config_path);
  if (seed) config.seed = *seed;
  if (threads) config.threads = *threads;
  experiment::RunOptions opts;
  opts.paper_scale = paper_scale;
  if (!quiet)
    opts.progress = [](const experiment::RunResult& r, std::size_t done, std::size_t total) {
      std::fprintf(stderr, "[%zu/%zu] %s median PER %.4f\n", done, total, r.run_id.c_str(), r.per_quartiles[1]);
    };
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = experiment::run_experiment(config, opts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  experiment::export_results(config, results, out, wall, paper_scale);
  std::printf("%zu runs, %llu epochs each, %.1f s; wrote %s\n", results.size(),
              static_cast<unsigned long long>(config.epochs(paper_scale)), wall,
              (fs::path(out) / "results.csv").string().c_str());
  return kOk;
}

int cmd_attack(const std::string& path, bool json) {
  const auto outcomes = adversary::run_scenarios(adversary::load_scenarios(path));
  bool all = true;
  for (const auto& o : outcomes) {
    all = all && o.matches;
    if (json) {
      std::printf("%s\n", o.verdict.to_json().c_str());
      continue;
    }
    const auto& e = o.verdict.evidence;
    std::printf("%-34s %-14s %-15s %-9s %s", o.verdict.scenario.c_str(),
                std::string(adversary::to_string(o.verdict.kind)).c_str(),
                std::string(protocol::to_string(o.verdict.security)).c_str(),
                o.verdict.succeeded ? "succeeded" : "failed", o.matches ? "ok" : "MISMATCH");
    if (o.verdict.kind == adversary::AttackKind::kInject || o.verdict.kind == adversary::AttackKind::kJam)
      std::printf("  attempts=%llu accepted=%llu", static_cast<unsigned long long>(e.attempts),
                  static_cast<unsigned long long>(e.accepted_forgeries));
    if (o.verdict.kind == adversary::AttackKind::kReplay)
      std::printf("  replays=%llu accepted=%llu", static_cast<unsigned long long>(e.replays_sent),
                  static_cast<unsigned long long>(e.replayed_accepts));
    std::printf("\n");
  }
  return all ? kOk : kMismatch;
}

/// Effective per-PHY BER for the analytic column, when the manifest's link
/// model makes it uniform.
std::function<std::optional<double>(const std::string&)> ber_lookup(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) return {};
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception&) {
    return {};
  }
  const auto& link = m.at("config").at("link");
  if (link.value("ber_model", "flat") != "flat") return {};
  const double base = link.value("base_ber", 0.0);
  const auto discount = link.at("ber_discount");
  return [base, discount](const std::string& phy) -> std::optional<double> {
    if (!discount.contains(phy)) return std::nullopt;
    return base * discount.at(phy).get<double>();
  };
}

int cmd_compare(const std::string& a, const std::string& b) {
  auto rows = experiment::read_csv(fs::path(a) / "results.csv");
  if (fs::path(a) != fs::path(b)) {
    const auto more = experiment::read_csv(fs::path(b) / "results.csv");
    rows.insert(rows.end(), more.begin(), more.end());
  }
  auto lookup = ber_lookup(a);
  if (!lookup) lookup = ber_lookup(b);
  std::fputs(experiment::format_report(experiment::compare_encrypted_delta(rows, lookup)).c_str(), stdout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure synchronous flooding simulator"};
  app.require_subcommand(1);

  std::string config_path, out = "results";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool paper_scale = false, quiet = false;
  auto* run = app.add_subcommand("run", "Run an experiment matrix and write results.csv and manifest.json");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("-o,--out", out, "Output directory");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_flag("--paper-scale", paper_scale, "Use the long duration (6000 floods at the defaults)");
  run->add_flag("-q,--quiet", quiet, "No per-run progress");

  std::string scenario_path;
  bool json = false;
  auto* attack = app.add_subcommand("attack", "Run adversary scenarios; exit 2 if a verdict differs from its expectation");
  attack->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  attack->add_flag("--json", json, "One JSON verdict per line");

  std::string dir_a, dir_b;
  auto* compare = app.add_subcommand("compare", "Per-cell PER delta between encrypted and unencrypted runs");
  compare->add_option("dir_a", dir_a, "Result directory")->required();
  compare->add_option("dir_b", dir_b, "Result directory holding the other encryption mode")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, out, seed, paper_scale, threads, quiet);
    if (*attack) return cmd_attack(scenario_path, json);
    if (*compare) return cmd_compare(dir_a, dir_b);
  } catch (const experiment::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
  } catch (const adversary::ScenarioError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
  } catch (const protocol::EpochOverrun& e) {
    std::fprintf(stderr, "schedule does not fit: %s\n", e.what());
  } catch (const experiment::MissingPair& e) {
    std::fprintf(stderr, "compare: %s\n", e.what());
  } catch (const experiment::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  return kConfigError;
}
