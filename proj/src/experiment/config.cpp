// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/experiment/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sfsec::experiment {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, _] : j.items())
    if (!known.count(k)) throw ConfigError("unknown field '" + k + "' in " + where);
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

/// A number of `unit` nanoseconds that must land on a whole nanosecond.
Duration duration_field(const json& j, const char* key, double unit_ns, Duration fallback) {
  if (!j.contains(key)) return fallback;
  const double v = get<double>(j, key, 0.0);
  const double ns = v * unit_ns;
  if (!std::isfinite(ns) || ns < 0 || std::abs(ns - std::round(ns)) > 1e-6)
    throw ConfigError(std::string("field '") + key + "' is not a whole number of nanoseconds");
  return Duration{std::llround(ns)};
}

std::uint8_t byte_field(const json& j, const char* key, std::uint8_t fallback) {
  const auto v = get<std::int64_t>(j, key, fallback);
  if (v < 0 || v > 255) throw ConfigError(std::string("field '") + key + "' out of range");
  return static_cast<std::uint8_t>(v);
}

std::array<double, 4> per_phy(const json& j, const char* key, std::array<double, 4> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_object()) throw ConfigError(std::string("field '") + key + "' must map PHY names to numbers");
  for (const auto& [name, x] : v.items()) {
    const auto phy = framing::parse_phy(name);
    if (!phy || !x.is_number()) throw ConfigError(std::string("bad entry '") + name + "' in " + key);
    fallback[static_cast<std::size_t>(*phy)] = x.get<double>();
  }
  return fallback;
}

json per_phy_json(const std::array<double, 4>& a) {
  json j = json::object();
  for (auto m : framing::kAllPhys) j[std::string(framing::to_string(m))] = a[static_cast<std::size_t>(m)];
  return j;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  const fs::path p(path);
  return p.is_absolute() ? p.string() : (fs::path(base_dir) / p).lexically_normal().string();
}

double ms(Duration d) { return static_cast<double>(d.count()) / 1e6; }
double us(Duration d) { return static_cast<double>(d.count()) / 1e3; }

}  // namespace

sim::Topology TopologyRef::build(std::uint64_t seed) const {
  try {
    if (kind == "line") return sim::Topology::line(nodes, spacing_m);
    if (kind == "grid") return sim::Topology::grid(rows, cols, spacing_m);
    if (kind == "disk") return sim::Topology::random_disk(nodes, radius_m, seed);
    if (kind == "file") return sim::Topology::load(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("topology: ") + e.what());
  }
  throw ConfigError("unknown topology kind '" + kind + "'");
}

void ExperimentConfig::validate() const {
  if (phys.empty()) throw ConfigError("phys must not be empty");
  if (payloads.empty()) throw ConfigError("payloads must not be empty");
  if (encryption.empty()) throw ConfigError("encryption must not be empty");
  if (repeats == 0) throw ConfigError("repeats must be positive");
  if (data_phases == 0) throw ConfigError("data_phases must be positive");
  if (std::set(phys.begin(), phys.end()).size() != phys.size()) throw ConfigError("duplicate PHY");
  if (std::set(payloads.begin(), payloads.end()).size() != payloads.size()) throw ConfigError("duplicate payload");
  if (std::set(encryption.begin(), encryption.end()).size() != encryption.size())
    throw ConfigError("duplicate encryption mode");
  for (auto p : payloads)
    if (p == 0 || p > 240) throw ConfigError("payload sizes must be in 1..240");
  if (epoch_interval <= Duration{0}) throw ConfigError("epoch_interval must be positive");
  for (auto d : {duration, paper_duration})
    if (d <= Duration{0} || d % epoch_interval != Duration{0})
      throw ConfigError("duration must be a positive whole number of epoch intervals");
  if (topology.kind == "file" && !fs::exists(topology.path))
    throw ConfigError("topology file not found: " + topology.path);
  if (phy_table_path && !fs::exists(*phy_table_path)) throw ConfigError("phy table not found: " + *phy_table_path);
  if (link.base_ber < 0 || link.base_ber >= 1) throw ConfigError("base_ber must be in [0, 1)");
  if (drift_ppm_max < 0) throw ConfigError("drift_ppm_max must be non-negative");
  const auto topo = topology.build(seed);
  if (!topo.contains(source)) throw ConfigError("source node not in topology");
  if (topo.size() < 2) throw ConfigError("topology needs at least two nodes");
}

std::uint64_t ExperimentConfig::epochs(bool paper_scale) const {
  return static_cast<std::uint64_t>((paper_scale ? paper_duration : duration) / epoch_interval);
}

std::size_t ExperimentConfig::cell_count() const {
  return phys.size() * payloads.size() * encryption.size() * repeats;
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"name", "topology", "source", "phys", "payloads", "encryption", "epoch_interval_ms", "duration_s",
              "paper_duration_s", "repeats", "seed", "max_hops", "slot_count", "ind_max_hops", "ind_slot_count",
              "data_phases", "link", "drift_ppm_max", "resync_per_hop", "rx_guard_us", "airtime_error_us", "ccm",
              "capture_margin", "phy_table", "threads"},
             "config");
  ExperimentConfig c;
  c.name = get<std::string>(j, "name", c.name);
  if (j.contains("topology")) {
    const auto& t = j.at("topology");
    check_keys(t, {"kind", "nodes", "rows", "cols", "spacing_m", "radius_m", "file"}, "topology");
    c.topology.kind = get<std::string>(t, "kind", t.contains("file") ? "file" : "line");
    c.topology.nodes = get<std::size_t>(t, "nodes", c.topology.nodes);
    c.topology.rows = get<std::size_t>(t, "rows", c.topology.rows);
    c.topology.cols = get<std::size_t>(t, "cols", c.topology.cols);
    c.topology.spacing_m = get<double>(t, "spacing_m", c.topology.spacing_m);
    c.topology.radius_m = get<double>(t, "radius_m", c.topology.radius_m);
    if (t.contains("file")) c.topology.path = resolve(get<std::string>(t, "file", ""), base_dir);
  }
  c.source = byte_field(j, "source", c.source);
  if (j.contains("phys")) {
    c.phys.clear();
    for (const auto& n : get<std::vector<std::string>>(j, "phys", {})) {
      const auto m = framing::parse_phy(n);
      if (!m) throw ConfigError("unknown PHY '" + n + "'");
      c.phys.push_back(*m);
    }
  }
  if (j.contains("payloads")) c.payloads = get<std::vector<std::uint16_t>>(j, "payloads", {});
  if (j.contains("encryption")) {
    c.encryption.clear();
    for (const auto& n : get<std::vector<std::string>>(j, "encryption", {})) {
      const auto m = protocol::parse_security(n);
      if (!m) throw ConfigError("unknown encryption mode '" + n + "'");
      c.encryption.push_back(*m);
    }
  }
  c.epoch_interval = duration_field(j, "epoch_interval_ms", 1e6, c.epoch_interval);
  c.duration = duration_field(j, "duration_s", 1e9, c.duration);
  c.paper_duration = duration_field(j, "paper_duration_s", 1e9, c.paper_duration);
  c.repeats = get<std::uint32_t>(j, "repeats", c.repeats);
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  c.max_hops = byte_field(j, "max_hops", c.max_hops);
  c.slot_count = byte_field(j, "slot_count", c.slot_count);
  c.ind_max_hops = byte_field(j, "ind_max_hops", c.ind_max_hops);
  c.ind_slot_count = byte_field(j, "ind_slot_count", c.ind_slot_count);
  c.data_phases = get<std::uint16_t>(j, "data_phases", c.data_phases);
  if (j.contains("link")) {
    const auto& l = j.at("link");
    check_keys(l,
               {"r50_m", "width_m", "truncate", "base_ber", "ber_discount", "ber_model", "ber_link_gain",
                "erasure_prob"},
               "link");
    c.link.r50_m = per_phy(l, "r50_m", c.link.r50_m);
    c.link.width_m = get<double>(l, "width_m", c.link.width_m);
    c.link.truncate = get<double>(l, "truncate", c.link.truncate);
    c.link.base_ber = get<double>(l, "base_ber", c.link.base_ber);
    c.link.ber_discount = per_phy(l, "ber_discount", c.link.ber_discount);
    const auto model = get<std::string>(l, "ber_model", "flat");
    if (model == "flat") {
      c.link.ber_model = sim::BerModel::kFlat;
    } else if (model == "link_quality") {
      c.link.ber_model = sim::BerModel::kLinkQuality;
    } else {
      throw ConfigError("unknown ber_model '" + model + "'");
    }
    c.link.ber_link_gain = get<double>(l, "ber_link_gain", c.link.ber_link_gain);
    c.link.erasure_prob = get<double>(l, "erasure_prob", c.link.erasure_prob);
  }
  c.drift_ppm_max = get<double>(j, "drift_ppm_max", c.drift_ppm_max);
  c.resync_per_hop = get<bool>(j, "resync_per_hop", c.resync_per_hop);
  c.rx_guard = duration_field(j, "rx_guard_us", 1e3, c.rx_guard);
  if (j.contains("airtime_error_us")) {
    // May be negative.
    const double v = get<double>(j, "airtime_error_us", 0.0);
    if (std::abs(v * 1e3 - std::round(v * 1e3)) > 1e-6)
      throw ConfigError("field 'airtime_error_us' is not a whole number of nanoseconds");
    c.airtime_error = Duration{std::llround(v * 1e3)};
  }
  const auto ccm = get<std::string>(j, "ccm", "hardware");
  if (ccm == "hardware") {
    c.ccm_mode = crypto::CcmMode::kHardware;
  } else if (ccm == "software") {
    c.ccm_mode = crypto::CcmMode::kSoftware;
  } else {
    throw ConfigError("ccm must be 'hardware' or 'software'");
  }
  c.capture_margin = get<double>(j, "capture_margin", c.capture_margin);
  if (j.contains("phy_table")) c.phy_table_path = resolve(get<std::string>(j, "phy_table", ""), base_dir);
  c.threads = get<unsigned>(j, "threads", c.threads);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), fs::path(path).parent_path().string());
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["name"] = name;
  json t;
  t["kind"] = topology.kind;
  if (topology.kind == "file") {
    t["file"] = topology.path;
  } else if (topology.kind == "grid") {
    t["rows"] = topology.rows;
    t["cols"] = topology.cols;
    t["spacing_m"] = topology.spacing_m;
  } else {
    t["nodes"] = topology.nodes;
    t[topology.kind == "disk" ? "radius_m" : "spacing_m"] =
        topology.kind == "disk" ? topology.radius_m : topology.spacing_m;
  }
  j["topology"] = t;
  j["source"] = source;
  j["phys"] = json::array();
  for (auto m : phys) j["phys"].push_back(std::string(framing::to_string(m)));
  j["payloads"] = payloads;
  j["encryption"] = json::array();
  for (auto m : encryption) j["encryption"].push_back(std::string(protocol::to_string(m)));
  j["epoch_interval_ms"] = ms(epoch_interval);
  j["duration_s"] = ms(duration) / 1e3;
  j["paper_duration_s"] = ms(paper_duration) / 1e3;
  j["repeats"] = repeats;
  j["seed"] = seed;
  j["max_hops"] = max_hops;
  j["slot_count"] = slot_count;
  j["ind_max_hops"] = ind_max_hops;
  j["ind_slot_count"] = ind_slot_count;
  j["data_phases"] = data_phases;
  json l;
  l["r50_m"] = per_phy_json(link.r50_m);
  l["width_m"] = link.width_m;
  l["truncate"] = link.truncate;
  l["base_ber"] = link.base_ber;
  l["ber_discount"] = per_phy_json(link.ber_discount);
  l["ber_model"] = std::string(sim::to_string(link.ber_model));
  l["ber_link_gain"] = link.ber_link_gain;
  l["erasure_prob"] = link.erasure_prob;
  j["link"] = l;
  j["drift_ppm_max"] = drift_ppm_max;
  j["resync_per_hop"] = resync_per_hop;
  j["rx_guard_us"] = us(rx_guard);
  j["airtime_error_us"] = us(airtime_error);
  j["ccm"] = ccm_mode == crypto::CcmMode::kHardware ? "hardware" : "software";
  j["capture_margin"] = capture_margin;
  if (phy_table_path) j["phy_table"] = *phy_table_path;
  j["threads"] = threads;
  return j.dump(2);
}

}  // namespace sfsec::experiment
