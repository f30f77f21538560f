// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sfsec/framing/phy.hpp"
#include "sfsec/sim/topology.hpp"

namespace sfsec::sim {

enum class BerModel : std::uint8_t {
  /// Every link sees base_ber times the PHY coding discount.
  kFlat,
  /// Additionally scaled up on weak links: x (1 + gain * (1 - p_link)).
  kLinkQuality,
};

std::string_view to_string(BerModel m);

/// Synthetic distance-to-probability mapping. Values are illustrative, not
/// measured: a logistic in distance per PHY, truncated to exact 0 and 1 at
/// the tails.
struct LinkParams {
  /// Distance with p_link = 0.5, indexed by PhyMode (125k, 500k, 1M, 2M).
  std::array<double, 4> r50_m = {400.0, 320.0, 240.0, 190.0};
  double width_m = 20.0;
  /// p below this becomes 0, above 1 - this becomes 1.
  double truncate = 1e-4;

  double base_ber = 0.0;
  /// Multiplier on base_ber standing in for the coded PHYs' FEC gain.
  std::array<double, 4> ber_discount = {0.0625, 0.25, 1.0, 1.0};
  BerModel ber_model = BerModel::kFlat;
  double ber_link_gain = 9.0;

  /// Optional per-(slot, channel) erasure process for external interference.
  double erasure_prob = 0.0;
};

/// p(d) for a PHY under the logistic model.
double link_probability(double distance_m, framing::PhyMode phy, const LinkParams& params);

/// Reception probabilities and BERs for one PHY, indexed by topology index.
class LinkTable {
 public:
  struct Neighbor {
    std::uint16_t index;
    double p;
  };

  LinkTable(const Topology& topology, const LinkParams& params, framing::PhyMode phy);

  std::size_t size() const { return n_; }
  /// Probability that a frame from tx reaches rx.
  double p(std::size_t tx, std::size_t rx) const { return p_[tx * n_ + rx]; }
  double ber(std::size_t tx, std::size_t rx) const { return ber_[tx * n_ + rx]; }
  /// Transmitters with p > 0 towards rx.
  const std::vector<Neighbor>& incoming(std::size_t rx) const { return incoming_[rx]; }

  /// Hop distance from src over links with p >= threshold in both directions.
  /// Unreachable nodes get -1.
  std::vector<int> hop_distances(std::size_t src, double threshold) const;

 private:
  std::size_t n_;
  std::vector<double> p_;
  std::vector<double> ber_;
  std::vector<std::vector<Neighbor>> incoming_;
};

}  // namespace sfsec::sim
