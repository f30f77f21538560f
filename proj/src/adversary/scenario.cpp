// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/adversary/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sfsec::adversary {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("field '") + key + "': " + e.what());
  }
}

AttackScenario parse_one(const json& j) {
  if (!j.is_object()) throw ScenarioError("scenario must be an object");
  static const std::set<std::string> known = {"name",   "kind",     "security", "capabilities", "target_phase", "phy",
                                              "seed",   "epochs",   "attempts", "replay",       "expect"};
  for (const auto& [k, _] : j.items())
    if (!known.count(k)) throw ScenarioError("unknown scenario field '" + k + "'");
  AttackScenario s;
  s.name = get_or<std::string>(j, "name", "");
  const auto kind = parse_attack_kind(get_or<std::string>(j, "kind", ""));
  if (!kind) throw ScenarioError("scenario '" + s.name + "': unknown or missing kind");
  s.kind = *kind;
  const auto sec = protocol::parse_security(get_or<std::string>(j, "security", "on"));
  if (!sec) throw ScenarioError("scenario '" + s.name + "': bad security mode");
  s.security = *sec;
  if (j.contains("capabilities")) {
    const auto& c = j.at("capabilities");
    s.caps.knows_network_key = get_or(c, "knows_network_key", false);
    s.caps.knows_device_key = get_or(c, "knows_device_key", false);
    s.caps.can_record = get_or(c, "can_record", true);
  }
  s.target_phase = get_or<std::uint16_t>(j, "target_phase", 1);
  const auto phy = framing::parse_phy(get_or<std::string>(j, "phy", "1M"));
  if (!phy) throw ScenarioError("scenario '" + s.name + "': bad phy");
  s.phy = *phy;
  s.seed = get_or<std::uint64_t>(j, "seed", 1);
  s.epochs = get_or<std::uint64_t>(j, "epochs", 20);
  s.attempts = get_or<std::uint64_t>(j, "attempts", 1000);
  if (s.epochs == 0) throw ScenarioError("scenario '" + s.name + "': epochs must be positive");
  const auto mode = parse_replay_mode(get_or<std::string>(j, "replay", "cross_epoch"));
  if (!mode) throw ScenarioError("scenario '" + s.name + "': bad replay mode");
  s.replay = *mode;
  if (j.contains("expect")) s.expect_success = get_or<bool>(j.at("expect"), "succeeded", false);
  return s;
}

}  // namespace

std::vector<AttackScenario> parse_scenarios(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario file is not valid JSON: ") + e.what());
  }
  std::vector<AttackScenario> out;
  if (j.is_object() && j.contains("scenarios")) {
    for (const auto& s : j.at("scenarios")) out.push_back(parse_one(s));
  } else {
    out.push_back(parse_one(j));
  }
  return out;
}

std::vector<AttackScenario> load_scenarios(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenarios(ss.str());
}

std::vector<ScenarioOutcome> run_scenarios(const std::vector<AttackScenario>& scenarios) {
  std::vector<ScenarioOutcome> out;
  for (const auto& s : scenarios) {
    ScenarioOutcome o{run_attack(s), true};
    if (s.expect_success) o.matches = o.verdict.succeeded == *s.expect_success;
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<AttackScenario> claim_matrix(std::uint64_t inject_attempts, std::uint64_t seed) {
  using protocol::SecurityMode;
  std::vector<AttackScenario> m;
  auto add = [&](std::string name, AttackKind kind, SecurityMode sec, bool expect) {
    AttackScenario s;
    s.name = std::move(name);
    s.kind = kind;
    s.security = sec;
    s.seed = seed;
    s.attempts = inject_attempts;
    s.expect_success = expect;
    m.push_back(s);
    return &m.back();
  };
  add("eavesdrop-encrypted", AttackKind::kEavesdrop, SecurityMode::kOn, false);
  add("inject-encrypted", AttackKind::kInject, SecurityMode::kOn, false);
  add("replay-encrypted", AttackKind::kReplay, SecurityMode::kOn, false);
  add("replay-post-restart-encrypted", AttackKind::kReplay, SecurityMode::kOn, false)->replay = ReplayMode::kPostRestart;
  add("many-time-pad-encrypted", AttackKind::kManyTimePad, SecurityMode::kOn, true);
  add("many-time-pad-device-keys", AttackKind::kManyTimePad, SecurityMode::kOnDeviceKeys, false);
  add("eavesdrop-plain", AttackKind::kEavesdrop, SecurityMode::kOff, true);
  add("inject-plain", AttackKind::kInject, SecurityMode::kOff, true)->attempts = 1000;
  add("replay-plain", AttackKind::kReplay, SecurityMode::kOff, true);
  add("many-time-pad-plain", AttackKind::kManyTimePad, SecurityMode::kOff, true);
  return m;
}

}  // namespace sfsec::adversary
