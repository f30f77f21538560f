// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

namespace sfsec::experiment {

double mean(const std::vector<double>& xs);
/// Sample variance (n - 1); 0 for fewer than two values.
double variance(const std::vector<double>& xs);
/// Linear interpolation between order statistics.
double quantile(std::vector<double> xs, double q);
std::array<double, 3> quartiles(const std::vector<double>& xs);
/// Average ranks for ties.
std::vector<double> ranks(const std::vector<double>& xs);
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct Interval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
  bool contains(double x) const { return low <= x && x <= high; }
};

/// Normal-approximation 95% interval on the mean.
Interval mean_ci95(const std::vector<double>& xs);

}  // namespace sfsec::experiment
