// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfsec/experiment/export.hpp"
#include "sfsec/experiment/stats.hpp"

namespace sfsec::experiment {

class MissingPair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (1 - ber)^(8L) - (1 - ber)^(8(L + 5)).
double analytic_delta(double ber, std::size_t payload_bytes);

struct DeltaRow {
  std::string phy;
  std::uint16_t payload = 0;
  std::string encryption;
  std::size_t pairs = 0;
  double per_plain = 0.0;
  double per_secure = 0.0;
  /// Mean of per-node, per-repeat paired differences with its 95% interval.
  Interval delta;
  std::optional<double> analytic;
};

/// Pairs each encrypted row with the unencrypted row of the same phy,
/// payload, seed and node. Throws MissingPair if any encrypted row is unpaired.
/// `ber_by_phy` gives the effective bit-error rate used for the analytic column.
std::vector<DeltaRow> compare_encrypted_delta(const std::vector<CsvRow>& rows,
                                              const std::function<std::optional<double>(const std::string&)>& ber_by_phy = {});
std::vector<CsvRow> to_rows(const std::vector<RunResult>& results);

std::string format_report(const std::vector<DeltaRow>& rows);

}  // namespace sfsec::experiment
