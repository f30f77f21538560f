// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/sim/link_model.hpp"

#include <cmath>
#include <deque>

namespace sfsec::sim {

std::string_view to_string(BerModel m) { return m == BerModel::kFlat ? "flat" : "link_quality"; }

double link_probability(double distance_m, framing::PhyMode phy, const LinkParams& params) {
  const double r50 = params.r50_m[static_cast<std::size_t>(phy)];
  const double p = 1.0 / (1.0 + std::exp((distance_m - r50) / params.width_m));
  if (p < params.truncate) return 0.0;
  if (p > 1.0 - params.truncate) return 1.0;
  return p;
}

LinkTable::LinkTable(const Topology& topology, const LinkParams& params, framing::PhyMode phy)
    : n_(topology.size()), p_(n_ * n_, 0.0), ber_(n_ * n_, 0.0), incoming_(n_) {
  const double base = params.base_ber * params.ber_discount[static_cast<std::size_t>(phy)];
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j) p_[i * n_ + j] = link_probability(topology.distance(i, j), phy, params);

  for (const auto& o : topology.overrides()) {
    if (o.phy && *o.phy != phy) continue;
    const std::size_t a = topology.index_of(o.a);
    const std::size_t b = topology.index_of(o.b);
    p_[a * n_ + b] = o.p_link;
    if (o.symmetric) p_[b * n_ + a] = o.p_link;
  }

  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double p = p_[i * n_ + j];
      double ber = base;
      if (params.ber_model == BerModel::kLinkQuality) ber *= 1.0 + params.ber_link_gain * (1.0 - p);
      ber_[i * n_ + j] = std::min(ber, 0.5);
      if (p > 0.0) incoming_[j].push_back({static_cast<std::uint16_t>(i), p});
    }
  }
}

std::vector<int> LinkTable::hop_distances(std::size_t src, double threshold) const {
  std::vector<int> dist(n_, -1);
  std::deque<std::size_t> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n_; ++v) {
      if (dist[v] >= 0 || p(u, v) < threshold || p(v, u) < threshold) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

}  // namespace sfsec::sim
