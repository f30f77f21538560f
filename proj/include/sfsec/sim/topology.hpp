// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfsec/framing/phy.hpp"

namespace sfsec::sim {

enum class NodeRole : std::uint8_t {
  kHonest,
  /// Passive wideband receiver; logs per-slot outcomes, never transmits.
  kMonitor,
  /// Radio position controlled by an adversary scenario.
  kAttacker,
};

std::string_view to_string(NodeRole r);

struct NodeSpec {
  std::uint8_t id = 0;
  double x = 0.0;
  double y = 0.0;
  NodeRole role = NodeRole::kHonest;
};

/// Explicit reception probability between two nodes, replacing the
/// distance-derived value. No phy means every PHY.
struct LinkOverride {
  std::uint8_t a = 0;
  std::uint8_t b = 0;
  std::optional<framing::PhyMode> phy;
  double p_link = 0.0;
  bool symmetric = true;
};

class Topology {
 public:
  Topology() = default;
  Topology(std::vector<NodeSpec> nodes, std::vector<LinkOverride> overrides = {});

  static Topology line(std::size_t n, double spacing_m);
  static Topology grid(std::size_t rows, std::size_t cols, double spacing_m);
  /// n nodes uniform in a disk of the given radius; node 0 at the centre.
  static Topology random_disk(std::size_t n, double radius_m, std::uint64_t seed);

  /// JSON: {"nodes": [{"id", "x", "y", "role"?}], "links": [{"a", "b", "phy"?, "p", "symmetric"?}]}
  static Topology from_json(std::string_view text);
  static Topology load(const std::string& path);
  std::string to_json() const;

  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const std::vector<LinkOverride>& overrides() const { return overrides_; }
  std::size_t size() const { return nodes_.size(); }

  /// Index of a node id; throws std::out_of_range if absent.
  std::size_t index_of(std::uint8_t id) const;
  bool contains(std::uint8_t id) const;
  double distance(std::size_t i, std::size_t j) const;

  /// Appends a node; returns its index. Throws on duplicate id.
  std::size_t add(const NodeSpec& node);
  void add_override(const LinkOverride& o) { overrides_.push_back(o); }

 private:
  void validate() const;

  std::vector<NodeSpec> nodes_;
  std::vector<LinkOverride> overrides_;
  std::vector<int> index_;  // id -> index, -1 if absent
};

}  // namespace sfsec::sim
