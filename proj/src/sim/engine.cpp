// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/sim/engine.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "sfsec/common/mix.hpp"
#include "sfsec/protocol/device_layer.hpp"
#include "sfsec/protocol/ec_store.hpp"
#include "sfsec/protocol/hopping.hpp"
#include "sfsec/protocol/node.hpp"
#include "sfsec/protocol/pdu.hpp"
#include "sfsec/protocol/sync.hpp"
#include "sfsec/sim/clock.hpp"
#include "sfsec/sim/event_queue.hpp"
#include "sfsec/sim/rng.hpp"

namespace sfsec::sim {

using protocol::Pattern;
using protocol::Pdu;
using protocol::PduKind;
using protocol::SecurityMode;

const NodeStats& SimResult::node(std::uint8_t id) const {
  for (const auto& n : nodes)
    if (n.id == id) return n;
  throw std::out_of_range("no stats for node " + std::to_string(id));
}

namespace {

/// Bytes on air plus what the sender knows about them.
struct OnAir {
  Bytes bytes;
  std::uint64_t fp = 0;
  bool honest = false;
  Bytes plaintext;
  std::optional<Pdu> pdu;
  crypto::Nonce nonce;
};

struct Tx {
  std::uint16_t node = 0;
  SimTime start{};
  std::uint8_t channel = 0;
  std::shared_ptr<const OnAir> frame;
};

enum class PhaseRole : std::uint8_t { kIdle, kListening, kScanning, kRelaying };

struct NodeRt {
  NodeSpec spec;
  std::uint16_t index = 0;
  protocol::NodeState st;
  ClockModel clock;
  std::unique_ptr<protocol::EcStore> store;
  bool powered = true;
  bool skip_next_increment = false;
  bool has_device_key = false;

  // Local time the node associates with network time anchor_net.
  bool anchored = false;
  LocalTime anchor_local{};
  Duration anchor_net{};
  bool synced_this_epoch = false;
  bool ind_ok = false;

  PhaseRole role = PhaseRole::kIdle;
  Pdu tx_pdu;
  std::unordered_set<std::uint64_t> seen;
  NodeStats stats;

  bool honest() const { return spec.role == NodeRole::kHonest; }
};

// Event refs: 0 is an honest transmission; k > 0 is injection k - 1.
constexpr std::uint32_t kHonestRef = 0;

}  // namespace

struct Engine::Impl {
  SimConfig cfg;
  AttackerHook* hook = nullptr;
  LinkTable links;
  std::vector<protocol::PhaseTiming> timings;
  crypto::Key128 net_key;
  crypto::Key128 dev_key;
  crypto::CcmEngine ccm;
  KeyedRng rng;
  std::vector<NodeRt> nodes;
  std::size_t tk = 0;  // timekeeper index

  EventQueue queue;
  std::vector<std::vector<Tx>> buckets;
  std::unordered_map<std::uint64_t, std::shared_ptr<OnAir>> frame_cache;
  std::vector<std::pair<Injection, std::uint8_t>> injections;  // injection, slot
  std::vector<std::pair<std::uint8_t, std::uint64_t>> expected_bodies;  // origin, fingerprint

  SimResult result;
  std::uint64_t epoch = 0;
  std::uint16_t pc = 0;
  std::uint64_t epoch_ec = 0;
  Duration net_epoch_start{};
  std::vector<Candidate> cands;
  std::vector<const Tx*> cand_tx;

  Impl(SimConfig c, AttackerHook* h)
      : cfg(std::move(c)),
        hook(h),
        links(cfg.topology, cfg.link, cfg.phy),
        net_key(crypto::Key128::derive(cfg.network_key_label, crypto::KeyRole::kNetwork)),
        dev_key(crypto::Key128::derive(cfg.device_key_label, crypto::KeyRole::kDevice)),
        ccm(cfg.ledger_policy),
        rng(cfg.seed) {
    timings = cfg.schedule.timings(cfg.phy_table.get(cfg.phy), cfg.security, cfg.timing);
    validate();
    init_nodes();
  }

  // ---- setup ----

  void validate() const {
    if (cfg.topology.size() == 0) throw std::invalid_argument("topology has no nodes");
    if (cfg.epochs == 0) throw std::invalid_argument("epochs must be positive");
    if (cfg.guarantee_period == 0) throw std::invalid_argument("guarantee period must be positive");
    if (cfg.desync_after == 0) throw std::invalid_argument("desync_after must be positive");
    for (const auto& phase : cfg.schedule.phases()) {
      for (auto id : phase.initiators) {
        if (!cfg.topology.contains(id)) throw std::invalid_argument("initiator " + std::to_string(id) + " not in topology");
        if (cfg.topology.nodes()[cfg.topology.index_of(id)].role != NodeRole::kHonest)
          throw std::invalid_argument("initiators must be honest nodes");
      }
      if (phase.target && !cfg.topology.contains(*phase.target))
        throw std::invalid_argument("phase target not in topology");
      if (phase.payload_len > protocol::kMaxAppPayload) throw std::invalid_argument("payload too large");
    }
    for (const auto& r : cfg.restarts)
      if (!cfg.topology.contains(r.node)) throw std::invalid_argument("restart names an unknown node");
    for (const auto& l : cfg.late_joins)
      if (!cfg.topology.contains(l.node)) throw std::invalid_argument("late join names an unknown node");
  }

  void init_nodes() {
    const auto& topo = cfg.topology;
    tk = topo.index_of(cfg.schedule.ind().initiators.front());
    SplitMix64 drift_rng(cfg.seed ^ 0xd81f7c10c4ULL);
    nodes.resize(topo.size());
    for (std::size_t i = 0; i < topo.size(); ++i) {
      auto& n = nodes[i];
      n.spec = topo.nodes()[i];
      n.index = static_cast<std::uint16_t>(i);
      const double draw = drift_rng.uniform(-1.0, 1.0);
      std::int64_t ppb = static_cast<std::int64_t>(std::llround(draw * cfg.drift_ppm_max * 1000.0));
      if (auto it = cfg.drift_ppb.find(n.spec.id); it != cfg.drift_ppb.end()) ppb = it->second;
      Duration offset{0};
      if (auto it = cfg.clock_offset_ns.find(n.spec.id); it != cfg.clock_offset_ns.end()) offset = Duration{it->second};
      n.clock = ClockModel(ppb, offset);
      n.stats.id = n.spec.id;
      n.stats.role = n.spec.role;
      if (!n.honest()) continue;

      if (cfg.state_dir) {
        std::filesystem::create_directories(*cfg.state_dir);
        n.store = std::make_unique<protocol::FileEcStore>(*cfg.state_dir /
                                                          ("node_" + std::to_string(n.spec.id) + ".ec"));
      } else {
        n.store = std::make_unique<protocol::MemoryEcStore>();
      }
      n.st.node_id = n.spec.id;
      n.st.network_key = net_key;
      n.has_device_key = !cfg.device_key_holders || cfg.device_key_holders->count(n.spec.id) > 0;
      if (n.has_device_key) n.st.device_key = dev_key;
      n.st.is_timekeeper = i == tk;
      n.st.epoch_counter = cfg.initial_ec;
      n.st.ec_floor = cfg.initial_ec;
      if (cfg.start_joined || i == tk) {
        n.st.sync = protocol::SyncStatus::kJoined;
        n.skip_next_increment = true;
        n.anchored = true;
        n.anchor_local = n.clock.local(SimTime{0});
        n.anchor_net = Duration{0};
        n.stats.join_epoch = 0;
      }
    }
    for (const auto& l : cfg.late_joins) {
      auto& n = nodes[topo.index_of(l.node)];
      if (l.epoch > 0) {
        n.powered = false;
        n.stats.join_epoch.reset();
      }
    }
    result.data_phases = cfg.schedule.data_phase_count();
    result.deliveries.resize(nodes.size());
    result.delivered_matrix.assign(nodes.size(), {});
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].honest()) result.delivered_matrix[i].assign(cfg.epochs * result.data_phases, 0);
  }

  // ---- time helpers ----

  SimTime true_time(const NodeRt& n, Duration net) const {
    return n.clock.to_true(n.anchor_local + (net - n.anchor_net));
  }
  Duration net_slot(std::size_t p, std::uint8_t j) const { return net_epoch_start + timings[p].slot_offset(j); }
  SimTime nominal(std::size_t p, std::uint8_t j) const { return true_time(nodes[tk], net_slot(p, j)); }
  bool secure() const { return cfg.security != SecurityMode::kOff; }

  std::uint8_t channel_for(std::uint64_t ec, std::size_t p, std::uint8_t j) const {
    return protocol::hop_channel(ec, protocol::slot_index(static_cast<std::uint16_t>(p), j), cfg.guarantee_period);
  }

  SlotContext context(std::size_t p, std::uint8_t j) const {
    SlotContext c;
    c.epoch = epoch;
    c.ec = epoch_ec;
    c.pc = static_cast<std::uint16_t>(p);
    c.slot = j;
    c.channel = channel_for(epoch_ec, p, j);
    c.start = nominal(p, j);
    c.timing = &timings[p];
    c.spec = &cfg.schedule.phases()[p];
    return c;
  }

  void log_event(SimTime t, std::uint8_t node, EventKind kind, std::string_view outcome) {
    if (!cfg.event_log) return;
    std::ostringstream s;
    s << "{\"t\":" << t.count() << ",\"node\":" << int(node) << ",\"kind\":\"" << to_string(kind)
      << "\",\"epoch\":" << epoch << ",\"pc\":" << pc << ",\"outcome\":\"" << outcome << "\"}";
    result.event_log.push_back(s.str());
  }

  // ---- epoch boundary ----

  void restart(NodeRt& n, const RestartSpec& r) {
    n.seen.clear();
    n.role = PhaseRole::kIdle;
    n.st.missed_inds = 0;
    n.st.reference_time.reset();
    if (!r.persist) n.store->wipe();
    if (r.corrupt_store) {
      if (auto* mem = dynamic_cast<protocol::MemoryEcStore*>(n.store.get())) {
        mem->corrupt();
      } else if (auto* file = dynamic_cast<protocol::FileEcStore*>(n.store.get())) {
        std::ofstream(file->path(), std::ios::binary | std::ios::trunc) << "bad";
      }
    }
    const bool is_tk = n.index == tk;
    // Volatile state is gone; the floor is whatever the store can vouch for.
    n.st.ec_floor = 0;
    try {
      const std::uint64_t ec = protocol::restore_ec(*n.store);
      n.st.epoch_counter = ec;
      n.st.ec_floor = ec;
      n.st.fail_closed = false;
      if (is_tk) {
        n.st.sync = protocol::SyncStatus::kJoined;
        n.skip_next_increment = true;
      } else {
        n.st.sync = protocol::SyncStatus::kUnjoined;
        n.anchored = false;
      }
    } catch (const protocol::StoreCorrupt&) {
      n.st.fail_closed = true;
      n.st.sync = protocol::SyncStatus::kUnjoined;
      if (!is_tk) n.anchored = false;
    } catch (const std::overflow_error&) {
      n.st.fail_closed = true;
      n.st.sync = protocol::SyncStatus::kUnjoined;
    }
  }

  void begin_epoch() {
    net_epoch_start = cfg.schedule.interval() * static_cast<std::int64_t>(epoch);
    log_event(true_time(nodes[tk], net_epoch_start), nodes[tk].spec.id, EventKind::kEpochBoundary, "-");
    for (const auto& l : cfg.late_joins) {
      if (l.epoch != epoch || l.epoch == 0) continue;
      auto& n = nodes[cfg.topology.index_of(l.node)];
      n.powered = true;
      n.st.sync = protocol::SyncStatus::kUnjoined;
      n.anchored = false;
    }
    for (const auto& r : cfg.restarts)
      if (r.epoch == epoch) restart(nodes[cfg.topology.index_of(r.node)], r);

    for (auto& n : nodes) {
      if (!n.honest() || !n.powered) continue;
      if (n.skip_next_increment) {
        n.skip_next_increment = false;
      } else {
        protocol::begin_epoch(n.st);
      }
      if (n.st.joined() && !n.st.fail_closed) n.store->save(n.st.epoch_counter);
      n.seen.clear();
      n.synced_this_epoch = false;
      n.ind_ok = false;
    }
    epoch_ec = nodes[tk].st.epoch_counter;
  }

  // ---- frames ----

  std::shared_ptr<const OnAir> honest_frame(const NodeRt& n, std::size_t p, std::uint8_t j, const Pdu& tmpl) {
    Pdu pdu = tmpl;
    pdu.rc = j;
    Bytes plaintext = protocol::encode_pdu(pdu);
    const std::uint64_t pfp = fingerprint(plaintext);
    const auto& spec = cfg.schedule.phases()[p];
    crypto::Nonce nonce{};
    std::uint64_t key;
    if (secure()) {
      if (p != 0) nonce = crypto::build_nonce(n.st.epoch_counter, static_cast<std::uint16_t>(p), j);
      key = hash_words({1, nonce.epoch_counter, nonce.phase_counter, nonce.relay_counter, pfp});
    } else {
      key = hash_words({0, pfp});
    }
    if (auto it = frame_cache.find(key); it != frame_cache.end()) return it->second;

    auto air = std::make_shared<OnAir>();
    air->honest = true;
    air->nonce = nonce;
    if (secure()) {
      crypto::NonceUse use = crypto::NonceUse::kUnique;
      if (p == 0) {
        use = crypto::NonceUse::kInd;
      } else if (spec.pattern == Pattern::kMP2P) {
        use = cfg.security == SecurityMode::kOnDeviceKeys ? crypto::NonceUse::kMp2pInnerProtected
                                                          : crypto::NonceUse::kMp2p;
      }
      const Bytes aad{static_cast<std::uint8_t>(plaintext.size())};
      const auto out = ccm.seal(net_key, nonce, plaintext, aad, use);
      air->bytes = framing::encode_frame(out.ciphertext, out.mic);
    } else {
      air->bytes = framing::encode_fixed_frame(plaintext);
    }
    air->fp = fingerprint(air->bytes);
    air->plaintext = std::move(plaintext);
    air->pdu = std::move(pdu);
    frame_cache.emplace(key, air);
    return air;
  }

  Bytes app_payload(std::size_t p, std::uint8_t origin, std::size_t len) const {
    Bytes out(len);
    for (std::size_t i = 0; i < len; i += 8) {
      const std::uint64_t w = hash_words({0xa99, epoch, p, origin, i});
      for (std::size_t k = 0; k < 8 && i + k < len; ++k) out[i + k] = static_cast<std::uint8_t>(w >> (8 * k));
    }
    return out;
  }

  // ---- phase ----

  void schedule_tx(NodeRt& n, std::size_t p, std::uint8_t first, std::uint8_t last, SimTime ready, SimTime now) {
    const auto& t = timings[p];
    for (std::uint32_t j = first; j <= last && j < t.slots; ++j) {
      const auto slot = static_cast<std::uint8_t>(j);
      const SimTime at = true_time(n, net_slot(p, slot));
      if (at < ready || at <= now) continue;
      if (secure() && cfg.event_log) queue.push({at - crypto::ccm_latency(cfg.ccm_mode), EventKind::kCcmReady, n.index, slot, 0, 0});
      queue.push({at, EventKind::kTxBegin, n.index, slot, kHonestRef, 0});
    }
  }

  SimTime listen_time(const NodeRt& n, std::size_t p, std::uint8_t j) const {
    if (n.role == PhaseRole::kListening) return true_time(n, net_slot(p, j)) + cfg.rx_guard;
    return nominal(p, j) + timings[p].airtime + cfg.rx_guard;
  }

  void run_phase(std::size_t p) {
    pc = static_cast<std::uint16_t>(p);
    const auto& t = timings[p];
    const auto& spec = cfg.schedule.phases()[p];
    const bool is_ind = p == 0;
    buckets.assign(t.slots, {});
    frame_cache.clear();
    injections.clear();
    expected_bodies.clear();
    const std::uint64_t flood = epoch * result.data_phases + (p - 1);

    for (auto& n : nodes) {
      n.role = PhaseRole::kIdle;
      if (!n.honest()) continue;
      if (!n.powered) continue;
      const bool initiator = std::find(spec.initiators.begin(), spec.initiators.end(), n.spec.id) != spec.initiators.end();
      if (!is_ind && !initiator && is_deliverer(spec, n.spec.id)) ++n.stats.expected;
      if (n.st.fail_closed && secure()) continue;
      if (!n.st.joined()) {
        if (is_ind && n.index != tk) n.role = PhaseRole::kScanning;
        continue;
      }
      if (initiator && !n.st.fail_closed) {
        Pdu pdu;
        pdu.origin = n.spec.id;
        pdu.target = spec.target.value_or(protocol::kBroadcast);
        if (is_ind) {
          pdu.kind = PduKind::kInd;
          pdu.body = protocol::encode_ind({n.st.epoch_counter, 0});
        } else {
          pdu.kind = PduKind::kData;
          Bytes plain = app_payload(p, n.spec.id, spec.payload_len);
          if (cfg.security == SecurityMode::kOnDeviceKeys) {
            pdu.body = protocol::device_encrypt(ccm, dev_key, plain,
                                                protocol::app_nonce(n.st.epoch_counter, pc, n.spec.id));
          } else {
            pdu.body = plain;
          }
          expected_bodies.emplace_back(n.spec.id, fingerprint(pdu.body));
          TxRecord rec{epoch, n.st.epoch_counter, pc, n.spec.id, {}, {}, {}};
          if (cfg.keep_payloads) {
            rec.plaintext = std::move(plain);
            rec.body = pdu.body;
            rec.frame = honest_frame(n, p, 0, pdu)->bytes;
          }
          result.tx_log.push_back(std::move(rec));
        }
        n.tx_pdu = std::move(pdu);
        n.role = PhaseRole::kRelaying;
        const SimTime start = true_time(n, net_slot(p, 0));
        schedule_tx(n, p, 0, static_cast<std::uint8_t>(std::min<int>(spec.slot_count, t.slots) - 1), SimTime::min(),
                    start - Duration{1});
        continue;
      }
      if (is_ind && n.index == tk) continue;
      n.role = PhaseRole::kListening;
    }

    for (auto& n : nodes) {
      if (n.role == PhaseRole::kListening || n.role == PhaseRole::kScanning) {
        queue.push({listen_time(n, p, 0), EventKind::kRxWindow, n.index, 0, 0, 0});
      } else if (!n.honest()) {
        for (std::uint8_t j = 0; j < t.slots; ++j)
          queue.push({nominal(p, j) + t.airtime + cfg.rx_guard, EventKind::kRxWindow, n.index, j, 0, 0});
      }
    }
    if (hook) {
      for (std::uint8_t j = 0; j < t.slots; ++j)
        queue.push({nominal(p, j) - 4 * cfg.rx_guard, EventKind::kSlotStart, nodes[tk].index, j, 0, 0});
    }

    while (!queue.empty()) {
      const SimEvent ev = queue.pop();
      ++result.events_processed;
      switch (ev.kind) {
        case EventKind::kSlotStart: on_slot_start(p, ev); break;
        case EventKind::kCcmReady: log_event(ev.time, nodes[ev.node].spec.id, ev.kind, "-"); break;
        case EventKind::kTxBegin: on_tx_begin(p, ev); break;
        case EventKind::kTxEnd: log_event(ev.time, nodes[ev.node].spec.id, ev.kind, "-"); break;
        case EventKind::kRxWindow: on_rx_window(p, ev, flood); break;
        case EventKind::kEpochBoundary: break;
      }
    }

    if (is_ind) {
      for (auto& n : nodes) {
        if (!n.honest() || !n.powered || n.index == tk || n.ind_ok) continue;
        const bool was_joined = n.st.joined();
        protocol::miss_ind(n.st, cfg.desync_after);
        if (was_joined && !n.st.joined()) {
          ++n.stats.desyncs;
          n.anchored = false;
        }
      }
    }
  }

  static bool is_deliverer(const protocol::PhaseSpec& spec, std::uint8_t id) {
    if (spec.pattern == Pattern::kP2MP) return true;
    return spec.target && *spec.target == id;
  }

  void on_slot_start(std::size_t p, const SimEvent& ev) {
    log_event(ev.time, nodes[ev.node].spec.id, ev.kind, "-");
    std::vector<Injection> out;
    hook->inject(context(p, ev.slot), out);
    queue_injections(p, ev.slot, std::move(out), ev.time);
  }

  void queue_injections(std::size_t p, std::uint8_t slot, std::vector<Injection> out, SimTime now) {
    for (auto& inj : out) {
      if (!cfg.topology.contains(inj.position)) throw std::invalid_argument("injection from unknown position");
      const auto idx = cfg.topology.index_of(inj.position);
      if (nodes[idx].honest()) throw std::invalid_argument("injection from an honest node");
      const SimTime at = std::max(now, nominal(p, slot) + inj.offset);
      injections.emplace_back(std::move(inj), slot);
      queue.push({at, EventKind::kTxBegin, static_cast<std::uint16_t>(idx), slot,
                  static_cast<std::uint32_t>(injections.size()), 0});
    }
  }

  void on_tx_begin(std::size_t p, const SimEvent& ev) {
    auto& n = nodes[ev.node];
    Tx tx;
    tx.node = n.index;
    tx.start = ev.time;
    bool honest = ev.ref == kHonestRef;
    if (honest) {
      if (!n.powered || n.role != PhaseRole::kRelaying) return;
      tx.frame = honest_frame(n, p, ev.slot, n.tx_pdu);
      tx.channel = channel_for(n.st.epoch_counter, p, ev.slot);
      ++n.stats.transmissions;
    } else {
      const auto& [inj, slot] = injections[ev.ref - 1];
      auto air = std::make_shared<OnAir>();
      air->bytes = inj.frame;
      air->fp = fingerprint(air->bytes);
      tx.frame = std::move(air);
      tx.channel = inj.channel.value_or(channel_for(epoch_ec, p, slot));
    }
    buckets[ev.slot].push_back(tx);
    log_event(ev.time, n.spec.id, ev.kind, honest ? "honest" : "injected");
    if (cfg.event_log) queue.push({ev.time + timings[p].airtime, EventKind::kTxEnd, n.index, ev.slot, 0, 0});
    if (hook && honest) {
      AirEvent air{context(p, ev.slot), n.spec.id, tx.start, tx.channel, &tx.frame->bytes, true};
      std::vector<Injection> out;
      hook->on_air(air, out);
      queue_injections(p, ev.slot, std::move(out), ev.time);
    }
  }

  struct Decoded {
    RxResult result = RxResult::kErased;
    std::optional<Pdu> pdu;
    SimTime start{};
    const Tx* tx = nullptr;
    Bytes raw;
    std::uint32_t bits = 0;
  };

  /// Link-level reception plus bit errors and frame decoding. Authentication
  /// is left to the caller.
  Decoded receive(std::size_t p, std::uint8_t j, const NodeRt& n, std::optional<std::uint8_t> channel,
                  std::optional<SimTime> expected) {
    Decoded d;
    const auto& t = timings[p];
    cands.clear();
    cand_tx.clear();
    for (const auto& tx : buckets[j]) {
      if (tx.node == n.index) continue;
      if (channel && tx.channel != *channel) continue;
      if (expected) {
        const auto dt = tx.start - *expected;
        if (dt > cfg.rx_guard || dt < -cfg.rx_guard) continue;
      }
      const double pl = links.p(tx.node, n.index);
      if (pl <= 0.0) continue;
      cands.push_back({tx.start, tx.frame->fp, pl, tx.node});
      cand_tx.push_back(&tx);
    }
    const std::uint64_t key = rng.key({epoch, p, j, n.index});
    if (cands.empty()) return d;
    if (cfg.link.erasure_prob > 0.0 &&
        rng.uniform({epoch, p, j, cand_tx.front()->channel, 0xe5a5e}) < cfg.link.erasure_prob)
      return d;
    const RxOutcome o = resolve_reception(cands, cfg.reception, key);
    d.result = o.result;
    if (o.result != RxResult::kReceived) return d;
    const Tx* tx = cand_tx[static_cast<std::size_t>(o.chosen)];
    d.tx = tx;
    d.start = o.rx_time;
    const double ber = links.ber(tx->node, n.index);
    const std::uint64_t ber_key = mix64(key ^ 0xbe5be5ULL);
    const Bytes* bytes = &tx->frame->bytes;
    if (first_error_byte(ber, ber_key, bytes->size()) != std::numeric_limits<std::size_t>::max()) {
      d.raw = *bytes;
      d.bits = apply_bit_errors(d.raw, ber, ber_key);
      bytes = &d.raw;
    }
    const auto dec = framing::decode_frame(*bytes, t.format, t.max_packet_length);
    if (dec.error == framing::DecodeError::kLengthOverrun) {
      d.result = RxResult::kLengthOverrun;
      return d;
    }
    if (!dec.ok()) {
      d.result = RxResult::kCrcFail;
      return d;
    }
    if (d.raw.empty()) d.raw = *bytes;
    return d;
  }

  /// Outer-layer authentication for an honest receiver.
  std::optional<Pdu> authenticate(const NodeRt& n, std::size_t p, std::uint8_t j, const Decoded& d) const {
    const auto& t = timings[p];
    const auto dec = framing::decode_frame(d.raw, t.format, t.max_packet_length);
    if (!secure()) return protocol::decode_pdu(dec.frame->payload);
    const crypto::Nonce nonce =
        p == 0 ? crypto::kIndNonce : crypto::build_nonce(n.st.epoch_counter, static_cast<std::uint16_t>(p), j);
    const OnAir& air = *d.tx->frame;
    if (air.honest && d.bits == 0 && air.nonce == nonce) return air.pdu;
    const Bytes aad{dec.frame->length};
    const auto plain = crypto::ccm_decrypt(net_key, nonce, dec.frame->payload, aad, *dec.frame->mic);
    if (!plain) return std::nullopt;
    return protocol::decode_pdu(*plain);
  }

  void on_rx_window(std::size_t p, const SimEvent& ev, std::uint64_t flood) {
    auto& n = nodes[ev.node];
    const auto& t = timings[p];
    const std::uint8_t j = ev.slot;
    if (!n.honest()) {
      sniff(p, j, n);
      return;
    }
    if (n.role != PhaseRole::kListening && n.role != PhaseRole::kScanning) return;

    Decoded d;
    if (n.role == PhaseRole::kListening) {
      d = receive(p, j, n, channel_for(n.st.epoch_counter, p, j), true_time(n, net_slot(p, j)));
    } else {
      d = receive(p, j, n, protocol::kGuaranteedChannel, std::nullopt);
    }
    bool accepted = false;
    if (d.result == RxResult::kReceived) {
      auto pdu = authenticate(n, p, j, d);
      if (!pdu) {
        d.result = RxResult::kAuthFail;
      } else {
        accepted = on_receive(n, p, j, *pdu, d.start, ev.time, flood);
      }
    }
    ++n.stats.outcomes[static_cast<std::size_t>(d.result)];
    ++result.outcome_histogram[static_cast<std::size_t>(d.result)];
    log_event(ev.time, n.spec.id, ev.kind, to_string(d.result));
    if (!accepted && j + 1 < t.slots && (n.role == PhaseRole::kListening || n.role == PhaseRole::kScanning)) {
      const auto next = static_cast<std::uint8_t>(j + 1);
      queue.push({listen_time(n, p, next), EventKind::kRxWindow, n.index, next, 0, 0});
    }
  }

  void sniff(std::size_t p, std::uint8_t j, const NodeRt& n) {
    const SlotContext ctx = context(p, j);
    Decoded d = receive(p, j, n, ctx.channel, std::nullopt);
    if (n.spec.role == NodeRole::kMonitor) {
      result.monitor_log.push_back(
          {epoch, pc, j, n.spec.id, d.result, static_cast<std::uint32_t>(cands.size())});
      return;
    }
    if (hook && d.result == RxResult::kReceived) {
      Overheard o{ctx, n.spec.id, d.result, std::move(d.raw)};
      hook->on_overheard(o);
    }
  }

  /// Returns false if the node rejects the frame and keeps listening.
  bool on_receive(NodeRt& n, std::size_t p, std::uint8_t j, const Pdu& pdu, SimTime start, SimTime now,
                  std::uint64_t flood) {
    const auto& t = timings[p];
    const auto& spec = cfg.schedule.phases()[p];
    const bool is_ind = p == 0;
    std::uint8_t rc = j;
    if (is_ind) {
      if (pdu.kind != PduKind::kInd) return false;
      const auto ind = protocol::decode_ind(pdu.body);
      if (!ind) return false;
      if (!protocol::ind_acceptable(n.st, ind->epoch_counter)) {
        ++n.stats.ind_rejected;
        return false;
      }
      const bool was_scanning = n.st.scanning();
      protocol::adopt_ind(n.st, ind->epoch_counter);
      n.ind_ok = true;
      ++n.stats.ind_received;
      if (was_scanning) {
        n.stats.join_epoch = epoch;
        n.store->save(n.st.epoch_counter);
      }
      // The zero IV does not bind the slot, so the RC comes from the PDU.
      rc = pdu.rc;
    } else {
      if (pdu.kind != PduKind::kData || !n.st.joined()) return false;
      if (!secure()) rc = pdu.rc;
    }
    if (rc >= t.slots) return false;

    if (cfg.resync_per_hop || !n.synced_this_epoch || !n.anchored) {
      const LocalTime rx_end = n.clock.local(start) + t.airtime;
      const LocalTime ref = protocol::compute_reference_time(rx_end, rc, t.hop_est, t.airtime_est);
      n.clock.resync(start);
      n.anchor_local = ref;
      n.anchor_net = net_epoch_start + t.start;
      n.anchored = true;
      n.st.reference_time = ref;
      n.synced_this_epoch = true;
    }
    n.st.phase_counter = static_cast<std::uint16_t>(p);
    n.st.expected_rc = rc;

    n.role = PhaseRole::kRelaying;
    n.tx_pdu = pdu;
    if (!n.st.fail_closed || !secure()) {
      const SimTime frame_end = start + t.airtime;
      const SimTime ready = secure() ? frame_end + crypto::ccm_latency(cfg.ccm_mode) : frame_end;
      const int last = std::min<int>(rc + spec.slot_count, t.slots - 1);
      if (rc + 1 <= last) schedule_tx(n, p, static_cast<std::uint8_t>(rc + 1), static_cast<std::uint8_t>(last), ready, now);
    }
    if (!is_ind && is_deliverer(spec, n.spec.id)) deliver(n, p, j, pdu, flood);
    return true;
  }

  void deliver(NodeRt& n, std::size_t p, std::uint8_t j, const Pdu& pdu, std::uint64_t flood) {
    const std::uint64_t body_fp = fingerprint(pdu.body);
    const std::uint64_t key = hash_words({n.st.epoch_counter, p, body_fp});
    if (!n.seen.insert(key).second) {
      ++n.stats.duplicates;
      return;
    }
    Delivery d;
    d.epoch = epoch;
    d.ec = n.st.epoch_counter;
    d.pc = static_cast<std::uint16_t>(p);
    d.origin = pdu.origin;
    d.slot = j;
    d.body_fingerprint = body_fp;
    d.genuine = std::any_of(expected_bodies.begin(), expected_bodies.end(),
                            [&](const auto& e) { return e.first == pdu.origin && e.second == body_fp; });
    Bytes payload = pdu.body;
    if (cfg.security == SecurityMode::kOnDeviceKeys) {
      std::optional<Bytes> inner;
      if (n.has_device_key)
        inner = protocol::device_decrypt(dev_key, pdu.body, protocol::app_nonce(d.ec, d.pc, pdu.origin));
      d.inner_ok = inner.has_value();
      if (inner) payload = std::move(*inner);
    }
    if (cfg.keep_payloads) d.payload = std::move(payload);
    if (d.genuine) {
      auto& cell = result.delivered_matrix[n.index][flood];
      if (!cell) {
        cell = 1;
        ++n.stats.delivered;
      }
    } else {
      ++n.stats.forged_deliveries;
    }
    result.deliveries[n.index].push_back(std::move(d));
  }

  SimResult run() {
    for (epoch = 0; epoch < cfg.epochs; ++epoch) {
      begin_epoch();
      for (std::size_t p = 0; p < timings.size(); ++p) run_phase(p);
    }
    const auto& ledger = ccm.ledger();
    result.ind_reuse = ledger.count(crypto::ReuseClass::kIndZeroIv);
    result.mp2p_reuse = ledger.count(crypto::ReuseClass::kMp2pSharedNonce);
    result.violations = ledger.violations();
    result.confidentiality_losses = ledger.confidentiality_losses();
    result.reuse_samples = ledger.samples();
    for (auto& n : nodes) {
      n.stats.final_ec = n.st.epoch_counter;
      n.stats.final_joined = n.st.joined();
      result.nodes.push_back(n.stats);
    }
    return std::move(result);
  }
};

Engine::Engine(SimConfig config, AttackerHook* hook) : impl_(std::make_unique<Impl>(std::move(config), hook)) {}
Engine::~Engine() = default;

SimResult Engine::run() { return impl_->run(); }
const SimConfig& Engine::config() const { return impl_->cfg; }
const LinkTable& Engine::links() const { return impl_->links; }
const std::vector<protocol::PhaseTiming>& Engine::timings() const { return impl_->timings; }
const crypto::Key128& Engine::network_key() const { return impl_->net_key; }
const crypto::Key128& Engine::device_key() const { return impl_->dev_key; }

SimResult run_simulation(const SimConfig& config, AttackerHook* hook) { return Engine(config, hook).run(); }

}  // namespace sfsec::sim
