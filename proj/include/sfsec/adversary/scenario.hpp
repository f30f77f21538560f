// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sfsec/adversary/attacks.hpp"

namespace sfsec::adversary {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"name", "kind", "security", "capabilities": {...}, "target_phase", "phy",
///  "seed", "epochs", "attempts", "replay", "expect": {"succeeded": bool}}
/// A file may hold one scenario object or {"scenarios": [...]}.
std::vector<AttackScenario> parse_scenarios(std::string_view text);
std::vector<AttackScenario> load_scenarios(const std::string& path);

struct ScenarioOutcome {
  AttackVerdict verdict;
  /// False only when an expectation exists and the verdict differs.
  bool matches = true;
};

std::vector<ScenarioOutcome> run_scenarios(const std::vector<AttackScenario>& scenarios);

/// The encrypted/unencrypted claim matrix with the given injection budget.
std::vector<AttackScenario> claim_matrix(std::uint64_t inject_attempts, std::uint64_t seed = 1);

}  // namespace sfsec::adversary
