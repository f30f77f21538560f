// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/adversary/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "sfsec/crypto/ccm.hpp"
#include "sfsec/framing/frame.hpp"
#include "sfsec/protocol/hopping.hpp"
#include "sfsec/protocol/pdu.hpp"
#include "sfsec/sim/engine.hpp"
#include "sfsec/sim/rng.hpp"

namespace sfsec::adversary {

using protocol::Pattern;
using protocol::PhaseSpec;
using protocol::SecurityMode;
using sim::AttackerHook;
using sim::Injection;
using sim::NodeRole;
using sim::Overheard;
using sim::SlotContext;

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::kEavesdrop: return "eavesdrop";
    case AttackKind::kInject: return "inject";
    case AttackKind::kReplay: return "replay";
    case AttackKind::kManyTimePad: return "many_time_pad";
    case AttackKind::kJam: return "jam";
  }
  return "?";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  for (auto k : {AttackKind::kEavesdrop, AttackKind::kInject, AttackKind::kReplay, AttackKind::kManyTimePad,
                 AttackKind::kJam})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string_view to_string(ReplayMode m) {
  switch (m) {
    case ReplayMode::kCrossEpoch: return "cross_epoch";
    case ReplayMode::kPostRestart: return "post_restart";
    case ReplayMode::kSameSlot: return "same_slot";
  }
  return "?";
}

std::optional<ReplayMode> parse_replay_mode(std::string_view name) {
  for (auto m : {ReplayMode::kCrossEpoch, ReplayMode::kPostRestart, ReplayMode::kSameSlot})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

double forgery_bound(std::uint64_t attempts) {
  return -std::expm1(static_cast<double>(attempts) * std::log1p(-std::ldexp(1.0, -32)));
}

std::string AttackVerdict::to_json() const {
  const auto& e = evidence;
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["kind"] = std::string(adversary::to_string(kind));
  j["security"] = std::string(protocol::to_string(security));
  j["succeeded"] = succeeded;
  j["evidence"] = {{"frames_captured", e.frames_captured},
                   {"frames_recovered", e.frames_recovered},
                   {"recovered_plaintext", e.recovered_plaintext},
                   {"ind_readable", e.ind_readable},
                   {"attempts", e.attempts},
                   {"attempts_received", e.attempts_received},
                   {"accepted_forgeries", e.accepted_forgeries},
                   {"forged_ind_joins", e.forged_ind_joins},
                   {"forgery_bound", e.forgery_bound},
                   {"replays_sent", e.replays_sent},
                   {"replayed_accepts", e.replayed_accepts},
                   {"ind_replays_rejected", e.ind_replays_rejected},
                   {"victim_deliveries", e.victim_deliveries},
                   {"victim_floods", e.victim_floods},
                   {"xor_match", e.xor_match},
                   {"inner_xor_match", e.inner_xor_match},
                   {"ledger_mp2p_reuse", e.ledger_mp2p_reuse},
                   {"ledger_confidentiality_losses", e.ledger_confidentiality_losses},
                   {"ledger_violations", e.ledger_violations},
                   {"victim_per", e.victim_per},
                   {"victim_desyncs", e.victim_desyncs}};
  return j.dump();
}

namespace {

// Honest chain I - R - V; the attacker radio X and the scanner W sit off to
// the side and only reach the nodes given explicit links.
constexpr std::uint8_t kI = 0;
constexpr std::uint8_t kR = 1;
constexpr std::uint8_t kV = 2;
constexpr std::uint8_t kW = 3;
constexpr std::uint8_t kX = 10;
constexpr std::uint8_t kX2 = 11;

void link(sim::Topology& t, std::uint8_t a, std::uint8_t b, double p = 1.0) {
  t.add_override({a, b, std::nullopt, p, true});
}

sim::SimConfig chain_config(const AttackScenario& s, const PhaseSpec& data, std::size_t data_phases) {
  sim::SimConfig c;
  c.topology = sim::Topology::line(3, 1000.0);
  link(c.topology, kI, kR);
  link(c.topology, kR, kV);
  c.topology.add({kX, 9000.0, 0.0, NodeRole::kAttacker});
  c.schedule = protocol::EpochSchedule(500ms, PhaseSpec{Pattern::kP2MP, {kI}, std::nullopt, 9, 4, 1},
                                       std::vector<PhaseSpec>(data_phases, data));
  c.security = s.security;
  c.phy = s.phy;
  c.seed = s.seed;
  c.epochs = s.epochs;
  c.keep_payloads = true;
  return c;
}

PhaseSpec chain_data(std::uint16_t payload = 20) { return {Pattern::kP2MP, {kI}, std::nullopt, payload, 3, 1}; }

void check_target(const AttackScenario& s, std::size_t data_phases) {
  if (s.target_phase == 0 || s.target_phase > data_phases)
    throw std::invalid_argument("target_phase must name a data phase (1.." + std::to_string(data_phases) + ")");
}

std::optional<framing::Frame> parse(const Bytes& bytes, const protocol::PhaseTiming& t) {
  auto d = framing::decode_frame(bytes, t.format, t.max_packet_length);
  return d.frame;
}

Bytes random_bytes(sim::SplitMix64& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.next());
  return out;
}

std::uint64_t honest_forgeries(const sim::SimResult& r) {
  std::uint64_t n = 0;
  for (const auto& s : r.nodes)
    if (s.role == NodeRole::kHonest) n += s.forged_deliveries;
  return n;
}

// ---- eavesdrop ----

class Eavesdropper final : public AttackerHook {
 public:
  Eavesdropper(const AttackScenario& s, const crypto::Key128& key) : s_(s), key_(key) {}

  void on_overheard(const Overheard& o) override {
    const auto frame = parse(o.frame, *o.ctx.timing);
    if (!frame) return;
    ++captured;
    std::optional<Bytes> plain;
    if (s_.security == SecurityMode::kOff) {
      plain = frame->payload;
    } else if (s_.caps.knows_network_key) {
      std::optional<crypto::Nonce> nonce;
      if (o.ctx.pc == 0) {
        nonce = crypto::kIndNonce;
      } else if (ec_) {
        nonce = crypto::build_nonce(ec_->second + (o.ctx.epoch - ec_->first), o.ctx.pc, o.ctx.slot);
      }
      if (nonce) plain = crypto::ccm_decrypt(key_, *nonce, frame->payload, Bytes{frame->length}, *frame->mic);
    }
    if (!plain) {
      // Ciphertext is all there is; take it at face value.
      guesses.push_back({o.ctx.epoch, o.ctx.pc, frame->payload.size() > protocol::kPduHeaderSize
                                                    ? Bytes(frame->payload.begin() + protocol::kPduHeaderSize,
                                                            frame->payload.end())
                                                    : Bytes{}});
      return;
    }
    const auto pdu = protocol::decode_pdu(*plain);
    if (!pdu) return;
    if (o.ctx.pc == 0) {
      if (const auto ind = protocol::decode_ind(pdu->body)) {
        ec_ = {o.ctx.epoch, ind->epoch_counter};
        ind_reads.emplace_back(o.ctx.epoch, ind->epoch_counter);
      }
      return;
    }
    guesses.push_back({o.ctx.epoch, o.ctx.pc, pdu->body});
  }

  struct Guess {
    std::uint64_t epoch;
    std::uint16_t pc;
    Bytes plaintext;
  };
  std::uint64_t captured = 0;
  std::vector<Guess> guesses;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ind_reads;

 private:
  const AttackScenario& s_;
  crypto::Key128 key_;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> ec_;  // sim epoch, EC
};

// ---- inject / jam ----

class Injector final : public AttackerHook {
 public:
  Injector(const AttackScenario& s, bool jam) : s_(s), jam_(jam), rng_(s.seed ^ 0x1ec7ULL) {}

  void inject(const SlotContext& ctx, std::vector<Injection>& out) override {
    if (ctx.slot != 0 || sent >= s_.attempts) return;
    const auto& t = *ctx.timing;
    const bool ind = ctx.pc == 0;
    Bytes frame;
    if (jam_) {
      frame = random_bytes(rng_, t.frame_bytes);
    } else if (s_.security == SecurityMode::kOff) {
      protocol::Pdu pdu;
      pdu.origin = kI;
      if (ind) {
        pdu.kind = protocol::PduKind::kInd;
        pdu.body = protocol::encode_ind({ctx.ec + 1000, 0});
      } else {
        pdu.body = random_bytes(rng_, t.format.fixed_payload_len - protocol::kPduHeaderSize);
      }
      frame = framing::encode_fixed_frame(protocol::encode_pdu(pdu));
    } else {
      const std::size_t len = t.frame_bytes - framing::kLengthBytes - crypto::kMicSize - framing::kCrcBytes;
      crypto::Mic mic;
      for (auto& b : mic.bytes) b = static_cast<std::uint8_t>(rng_.next());
      frame = framing::encode_frame(random_bytes(rng_, len), mic);
    }
    out.push_back({kX, std::move(frame), Duration{0},
                   ind ? std::optional<std::uint8_t>(protocol::kGuaranteedChannel) : std::optional(ctx.channel)});
    ++sent;
  }

  std::uint64_t sent = 0;

 private:
  const AttackScenario& s_;
  bool jam_;
  sim::SplitMix64 rng_;
};

// ---- replay ----

class Replayer final : public AttackerHook {
 public:
  Replayer(const AttackScenario& s, std::uint64_t restart_epoch) : s_(s), restart_(restart_epoch) {}

  void on_overheard(const Overheard& o) override {
    if (!s_.caps.can_record) return;
    if (o.ctx.pc == s_.target_phase) data_[o.ctx.epoch] = o.frame;
    if (o.ctx.pc == 0) ind_[o.ctx.epoch] = o.frame;
  }

  void on_air(const sim::AirEvent& a, std::vector<Injection>& out) override {
    if (s_.replay != ReplayMode::kSameSlot || a.ctx.pc != s_.target_phase || a.transmitter != kR) return;
    out.push_back({kX, *a.frame, a.start - a.ctx.start, a.channel});
    ++sent;
  }

  void inject(const SlotContext& ctx, std::vector<Injection>& out) override {
    if (s_.replay == ReplayMode::kSameSlot || ctx.slot != 0) return;
    const bool after = ctx.epoch >= restart_;
    // Post-restart replays draw only on pre-restart captures.
    const std::uint64_t limit = s_.replay == ReplayMode::kPostRestart ? std::min(ctx.epoch, restart_) : ctx.epoch;
    if (s_.replay == ReplayMode::kPostRestart && !after) return;
    if (ctx.pc == s_.target_phase) {
      if (auto f = latest(data_, limit)) {
        out.push_back({kX, *f, Duration{0}, ctx.channel});
        ++sent;
      }
    } else if (ctx.pc == 0 && s_.replay == ReplayMode::kPostRestart) {
      if (auto f = latest(ind_, limit)) {
        out.push_back({kX, *f, Duration{0}, protocol::kGuaranteedChannel});
        ++ind_sent;
      }
    }
  }

  std::uint64_t sent = 0;
  std::uint64_t ind_sent = 0;

 private:
  static std::optional<Bytes> latest(const std::map<std::uint64_t, Bytes>& m, std::uint64_t before) {
    auto it = m.lower_bound(before);
    if (it == m.begin()) return std::nullopt;
    return std::prev(it)->second;
  }

  const AttackScenario& s_;
  std::uint64_t restart_;
  std::map<std::uint64_t, Bytes> data_;
  std::map<std::uint64_t, Bytes> ind_;
};

// ---- many-time pad ----

class PadRecorder final : public AttackerHook {
 public:
  explicit PadRecorder(std::uint16_t pc) : pc_(pc) {}
  void on_overheard(const Overheard& o) override {
    if (o.ctx.pc != pc_ || o.ctx.slot != 0) return;
    const auto frame = parse(o.frame, *o.ctx.timing);
    if (frame) captured[{o.ctx.epoch, o.position}] = frame->payload;
  }
  std::map<std::pair<std::uint64_t, std::uint8_t>, Bytes> captured;

 private:
  std::uint16_t pc_;
};

}  // namespace

AttackVerdict run_eavesdrop(const AttackScenario& s) {
  auto c = chain_config(s, chain_data(), 1);
  check_target(s, 1);
  link(c.topology, kX, kI);
  Eavesdropper hook(s, crypto::Key128::derive(c.network_key_label, crypto::KeyRole::kNetwork));
  const auto r = sim::Engine(c, &hook).run();

  AttackVerdict v{s.name, s.kind, s.security, false, {}};
  auto& e = v.evidence;
  e.frames_captured = hook.captured;
  for (const auto& g : hook.guesses) {
    for (const auto& tx : r.tx_log) {
      if (tx.epoch != g.epoch || tx.pc != g.pc || tx.plaintext != g.plaintext) continue;
      ++e.frames_recovered;
      if (e.recovered_plaintext.empty()) e.recovered_plaintext = to_hex(g.plaintext);
    }
  }
  for (const auto& [epoch, ec] : hook.ind_reads) {
    for (const auto& tx : r.tx_log)
      if (tx.epoch == epoch && tx.ec == ec) e.ind_readable = true;
  }
  v.succeeded = e.frames_recovered > 0;
  return v;
}

namespace {

AttackVerdict inject_like(const AttackScenario& s, bool jam) {
  constexpr std::size_t kPhases = 49;
  auto c = chain_config(s, chain_data(), kPhases);
  check_target(s, kPhases);
  const std::uint64_t per_epoch = kPhases + 1;
  c.epochs = std::max<std::uint64_t>(s.epochs, (s.attempts + per_epoch - 1) / per_epoch + 1);
  c.topology.add({kW, 12000.0, 0.0, NodeRole::kHonest});
  link(c.topology, kX, kV);
  link(c.topology, kX, kW);
  c.late_joins = {{kW, 1}};
  Injector hook(s, jam);
  const auto r = sim::Engine(c, &hook).run();

  AttackVerdict v{s.name, s.kind, s.security, false, {}};
  auto& e = v.evidence;
  e.attempts = hook.sent;
  e.forgery_bound = forgery_bound(hook.sent);
  const auto& victim = r.node(kV);
  const auto& scanner = r.node(kW);
  const auto auth = static_cast<std::size_t>(sim::RxResult::kAuthFail);
  e.accepted_forgeries = honest_forgeries(r);
  e.forged_ind_joins = scanner.join_epoch.has_value() ? 1 : 0;
  e.attempts_received = victim.outcomes[auth] + scanner.outcomes[auth] + e.accepted_forgeries + scanner.ind_received;
  e.victim_per = victim.per();
  e.victim_desyncs = victim.desyncs;
  e.victim_deliveries = victim.delivered;
  e.victim_floods = victim.expected;
  e.ledger_violations = r.violations;
  if (!jam) v.succeeded = e.accepted_forgeries > 0 || e.forged_ind_joins > 0;
  return v;
}

}  // namespace

AttackVerdict run_inject(const AttackScenario& s) { return inject_like(s, false); }
AttackVerdict run_jam(const AttackScenario& s) { return inject_like(s, true); }

AttackVerdict run_replay(const AttackScenario& s) {
  auto c = chain_config(s, chain_data(), 1);
  check_target(s, 1);
  link(c.topology, kX, kV);
  const std::uint64_t restart = std::max<std::uint64_t>(2, c.epochs / 2);
  if (s.replay == ReplayMode::kPostRestart) c.restarts = {{kI, restart, true, false}, {kV, restart, true, false}};
  Replayer hook(s, restart);
  const auto r = sim::Engine(c, &hook).run();

  AttackVerdict v{s.name, s.kind, s.security, false, {}};
  auto& e = v.evidence;
  e.replays_sent = hook.sent + hook.ind_sent;
  // A replayed payload is one the honest initiator sent in an earlier epoch.
  std::map<std::uint64_t, std::uint64_t> first_epoch;  // body fingerprint -> epoch sent
  for (const auto& tx : r.tx_log) first_epoch.emplace(fingerprint(tx.body), tx.epoch);
  for (std::size_t i = 0; i < r.deliveries.size(); ++i) {
    for (const auto& d : r.deliveries[i]) {
      auto it = first_epoch.find(d.body_fingerprint);
      if (!d.genuine && it != first_epoch.end() && it->second < d.epoch) ++e.replayed_accepts;
    }
  }
  const auto& victim = r.node(kV);
  e.ind_replays_rejected = victim.ind_rejected;
  e.victim_deliveries = r.deliveries[c.topology.index_of(kV)].size();
  e.victim_floods = victim.expected;
  e.victim_per = victim.per();
  e.ledger_violations = r.violations;
  v.succeeded = e.replayed_accepts > 0 || e.victim_deliveries > e.victim_floods;
  return v;
}

AttackVerdict run_many_time_pad(const AttackScenario& s) {
  // Star around the timekeeper 0; MP2P initiators 1 and 2 report to 3. Each
  // attacker radio hears exactly one initiator.
  sim::SimConfig c;
  c.topology = sim::Topology::line(5, 1000.0);
  link(c.topology, 0, 1);
  link(c.topology, 0, 2, 0.6);
  link(c.topology, 0, 3);
  link(c.topology, 0, 4);
  c.topology.add({kX, 9000.0, 0.0, NodeRole::kAttacker});
  c.topology.add({kX2, 11000.0, 0.0, NodeRole::kAttacker});
  link(c.topology, kX, 1);
  link(c.topology, kX2, 2);
  c.reception.capture_margin = 0.1;
  c.schedule = protocol::EpochSchedule(500ms, PhaseSpec{Pattern::kP2MP, {0}, std::nullopt, 9, 4, 2},
                                       {PhaseSpec{Pattern::kMP2P, {1, 2}, 3, 24, 4, 2}});
  check_target(s, 1);
  c.security = s.security;
  c.phy = s.phy;
  c.seed = s.seed;
  c.epochs = s.epochs;
  c.keep_payloads = true;
  PadRecorder hook(s.target_phase);
  const auto r = sim::Engine(c, &hook).run();

  AttackVerdict v{s.name, s.kind, s.security, false, {}};
  auto& e = v.evidence;
  e.ledger_mp2p_reuse = r.mp2p_reuse;
  e.ledger_confidentiality_losses = r.confidentiality_losses;
  e.ledger_violations = r.violations;
  std::map<std::pair<std::uint64_t, std::uint8_t>, const sim::TxRecord*> sent;
  for (const auto& tx : r.tx_log) sent[{tx.epoch, tx.origin}] = &tx;
  e.frames_captured = hook.captured.size();
  for (std::uint64_t ep = 0; ep < c.epochs; ++ep) {
    auto c1 = hook.captured.find({ep, kX});
    auto c2 = hook.captured.find({ep, kX2});
    auto t1 = sent.find({ep, 1});
    auto t2 = sent.find({ep, 2});
    if (c1 == hook.captured.end() || c2 == hook.captured.end() || t1 == sent.end() || t2 == sent.end()) continue;
    const auto& a1 = t1->second->plaintext;
    const auto& a2 = t2->second->plaintext;
    Bytes x = c1->second;
    xor_into(x, c2->second);
    Bytes p = protocol::encode_pdu({protocol::PduKind::kData, 0, 1, 3, t1->second->body});
    xor_into(p, protocol::encode_pdu({protocol::PduKind::kData, 0, 2, 3, t2->second->body}));
    if (x == p) e.xor_match = true;
    // Known plaintext a1 plus the XOR yields a guess for a2.
    if (x.size() < protocol::kPduHeaderSize + a1.size()) continue;
    Bytes guess(x.begin() + protocol::kPduHeaderSize, x.begin() + protocol::kPduHeaderSize + a1.size());
    Bytes inner = a1;
    xor_into(inner, a2);
    if (guess == inner) e.inner_xor_match = true;
    xor_into(guess, a1);
    if (guess == a2) {
      ++e.frames_recovered;
      if (e.recovered_plaintext.empty()) e.recovered_plaintext = to_hex(guess);
    }
  }
  v.succeeded = e.frames_recovered > 0;
  return v;
}

AttackVerdict run_attack(const AttackScenario& s) {
  switch (s.kind) {
    case AttackKind::kEavesdrop: return run_eavesdrop(s);
    case AttackKind::kInject: return run_inject(s);
    case AttackKind::kReplay: return run_replay(s);
    case AttackKind::kManyTimePad: return run_many_time_pad(s);
    case AttackKind::kJam: return run_jam(s);
  }
  throw std::invalid_argument("unknown attack kind");
}

}  // namespace sfsec::adversary
