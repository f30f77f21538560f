// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/experiment/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sfsec/sim/reception.hpp"

#ifndef SFSEC_VERSION
#define SFSEC_VERSION "0.0.0"
#endif

namespace sfsec::experiment {

namespace {

std::string fixed6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_csv(const std::vector<RunResult>& results, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : results) {
    for (const auto& n : r.nodes) {
      out << r.run_id << ',' << r.seed << ',' << framing::to_string(r.cell.phy) << ',' << r.cell.payload << ','
          << protocol::to_string(r.cell.encryption) << ',' << static_cast<unsigned>(n.node_id) << ','
          << n.hops_from_source << ',' << n.expected << ',' << n.delivered << ',' << fixed6(n.per()) << '\n';
    }
  }
}

std::string to_csv(const std::vector<RunResult>& results) {
  std::ostringstream ss;
  write_csv(results, ss);
  return ss.str();
}

std::string manifest_json(const ExperimentConfig& config, const std::vector<RunResult>& results, double wall_clock_s,
                          bool paper_scale) {
  using nlohmann::json;
  json j;
  j["engine_version"] = SFSEC_VERSION;
  j["config"] = json::parse(config.to_json());
  j["paper_scale"] = paper_scale;
  j["epochs"] = config.epochs(paper_scale);
  j["runs"] = results.size();
  j["wall_clock_s"] = wall_clock_s;
  json hist = json::object();
  for (std::size_t k = 0; k < sim::kRxResultCount; ++k) {
    std::uint64_t total = 0;
    for (const auto& r : results) total += r.outcome_histogram[k];
    hist[std::string(sim::to_string(static_cast<sim::RxResult>(k)))] = total;
  }
  j["outcome_histogram"] = hist;
  json runs = json::array();
  for (const auto& r : results) {
    json q = json::array({r.per_quartiles[0], r.per_quartiles[1], r.per_quartiles[2]});
    runs.push_back({{"run_id", r.run_id}, {"seed", r.seed}, {"per_quartiles", q}});
  }
  j["run_summaries"] = runs;
  return j.dump(2) + "\n";
}

void export_results(const ExperimentConfig& config, const std::vector<RunResult>& results,
                    const std::filesystem::path& dir, double wall_clock_s, bool paper_scale) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "results.csv", to_csv(results));
  write_file(dir / "manifest.json", manifest_json(config, results, wall_clock_s, paper_scale));
}

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError(path.string() + ": unexpected header");
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 10 fields");
    try {
      CsvRow r;
      r.run_id = f[0];
      r.seed = std::stoull(f[1]);
      r.phy = f[2];
      r.payload = static_cast<std::uint16_t>(std::stoul(f[3]));
      r.encryption = f[4];
      r.node_id = static_cast<std::uint8_t>(std::stoul(f[5]));
      r.hops_from_source = std::stoi(f[6]);
      r.expected = std::stoull(f[7]);
      r.delivered = std::stoull(f[8]);
      r.per = std::stod(f[9]);
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace sfsec::experiment
