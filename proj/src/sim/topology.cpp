// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/sim/topology.hpp"

#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <stdexcept>

#include "sfsec/sim/rng.hpp"

namespace sfsec::sim {

using nlohmann::json;

std::string_view to_string(NodeRole r) {
  switch (r) {
    case NodeRole::kHonest: return "honest";
    case NodeRole::kMonitor: return "monitor";
    case NodeRole::kAttacker: return "attacker";
  }
  return "?";
}

namespace {

NodeRole parse_role(const std::string& s) {
  if (s == "honest") return NodeRole::kHonest;
  if (s == "monitor") return NodeRole::kMonitor;
  if (s == "attacker") return NodeRole::kAttacker;
  throw std::invalid_argument("unknown node role '" + s + "'");
}

}  // namespace

Topology::Topology(std::vector<NodeSpec> nodes, std::vector<LinkOverride> overrides)
    : overrides_(std::move(overrides)), index_(256, -1) {
  for (const auto& n : nodes) add(n);
  validate();
}

std::size_t Topology::add(const NodeSpec& node) {
  if (index_.empty()) index_.assign(256, -1);
  if (node.id == 0xff) throw std::invalid_argument("node id 255 is reserved for broadcast");
  if (index_[node.id] >= 0) throw std::invalid_argument("duplicate node id " + std::to_string(node.id));
  index_[node.id] = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  return nodes_.size() - 1;
}

void Topology::validate() const {
  for (const auto& o : overrides_) {
    if (!contains(o.a) || !contains(o.b))
      throw std::invalid_argument("link override names an unknown node");
    if (!(o.p_link >= 0.0 && o.p_link <= 1.0)) throw std::invalid_argument("p_link must be in [0, 1]");
  }
}

Topology Topology::line(std::size_t n, double spacing_m) {
  if (n == 0 || n > 255) throw std::invalid_argument("line size must be in 1..255");
  std::vector<NodeSpec> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({static_cast<std::uint8_t>(i), spacing_m * i, 0.0});
  return Topology(std::move(nodes));
}

Topology Topology::grid(std::size_t rows, std::size_t cols, double spacing_m) {
  if (rows * cols == 0 || rows * cols > 255) throw std::invalid_argument("grid size must be in 1..255");
  std::vector<NodeSpec> nodes;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      nodes.push_back({static_cast<std::uint8_t>(r * cols + c), spacing_m * c, spacing_m * r});
  return Topology(std::move(nodes));
}

Topology Topology::random_disk(std::size_t n, double radius_m, std::uint64_t seed) {
  if (n == 0 || n > 255) throw std::invalid_argument("disk size must be in 1..255");
  SplitMix64 rng(seed);
  std::vector<NodeSpec> nodes{{0, 0.0, 0.0}};
  for (std::size_t i = 1; i < n; ++i) {
    const double r = radius_m * std::sqrt(rng.uniform());
    const double a = 2.0 * M_PI * rng.uniform();
    nodes.push_back({static_cast<std::uint8_t>(i), r * std::cos(a), r * std::sin(a)});
  }
  return Topology(std::move(nodes));
}

Topology Topology::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("topology: ") + e.what());
  }
  try {
    std::vector<NodeSpec> nodes;
    for (const auto& n : j.at("nodes")) {
      const int id = n.at("id").get<int>();
      if (id < 0 || id > 254) throw std::invalid_argument("node id out of range");
      nodes.push_back({static_cast<std::uint8_t>(id), n.at("x").get<double>(), n.at("y").get<double>(),
                       parse_role(n.value("role", std::string("honest")))});
    }
    std::vector<LinkOverride> links;
    if (j.contains("links")) {
      for (const auto& l : j.at("links")) {
        LinkOverride o;
        o.a = static_cast<std::uint8_t>(l.at("a").get<int>());
        o.b = static_cast<std::uint8_t>(l.at("b").get<int>());
        if (l.contains("phy")) {
          const auto phy = framing::parse_phy(l.at("phy").get<std::string>());
          if (!phy) throw std::invalid_argument("unknown phy in link override");
          o.phy = *phy;
        }
        o.p_link = l.at("p").get<double>();
        o.symmetric = l.value("symmetric", true);
        links.push_back(o);
      }
    }
    return Topology(std::move(nodes), std::move(links));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("topology: ") + e.what());
  }
}

Topology Topology::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open topology file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string Topology::to_json() const {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : nodes_) {
    json e = {{"id", n.id}, {"x", n.x}, {"y", n.y}};
    if (n.role != NodeRole::kHonest) e["role"] = std::string(to_string(n.role));
    j["nodes"].push_back(e);
  }
  j["links"] = json::array();
  for (const auto& o : overrides_) {
    json e = {{"a", o.a}, {"b", o.b}, {"p", o.p_link}, {"symmetric", o.symmetric}};
    if (o.phy) e["phy"] = std::string(framing::to_string(*o.phy));
    j["links"].push_back(e);
  }
  return j.dump(2);
}

std::size_t Topology::index_of(std::uint8_t id) const {
  if (index_.empty() || index_[id] < 0) throw std::out_of_range("no node with id " + std::to_string(id));
  return static_cast<std::size_t>(index_[id]);
}

bool Topology::contains(std::uint8_t id) const { return !index_.empty() && index_[id] >= 0; }

double Topology::distance(std::size_t i, std::size_t j) const {
  return std::hypot(nodes_[i].x - nodes_[j].x, nodes_[i].y - nodes_[j].y);
}

}  // namespace sfsec::sim
