// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfsec/experiment/config.hpp"
#include "sfsec/experiment/runner.hpp"

namespace sfsec::experiment {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kCsvHeader =
    "run_id,seed,phy,payload_bytes,encryption,node_id,hops_from_source,packets_expected,packets_delivered,per";

void write_csv(const std::vector<RunResult>& results, std::ostream& out);
std::string to_csv(const std::vector<RunResult>& results);

std::string manifest_json(const ExperimentConfig& config, const std::vector<RunResult>& results, double wall_clock_s,
                          bool paper_scale);

/// Writes <dir>/results.csv and <dir>/manifest.json. Throws IoError.
void export_results(const ExperimentConfig& config, const std::vector<RunResult>& results,
                    const std::filesystem::path& dir, double wall_clock_s = 0.0, bool paper_scale = false);

/// One parsed CSV row.
struct CsvRow {
  std::string run_id;
  std::uint64_t seed = 0;
  std::string phy;
  std::uint16_t payload = 0;
  std::string encryption;
  std::uint8_t node_id = 0;
  int hops_from_source = -1;
  std::uint64_t expected = 0;
  std::uint64_t delivered = 0;
  double per = 0.0;
};

/// Throws IoError on a missing file or a malformed row.
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

}  // namespace sfsec::experiment
