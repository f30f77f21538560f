// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sfsec/crypto/ccm.hpp"
#include "sfsec/crypto/nonce_ledger.hpp"
#include "sfsec/framing/phy.hpp"
#include "sfsec/protocol/schedule.hpp"
#include "sfsec/sim/link_model.hpp"
#include "sfsec/sim/reception.hpp"
#include "sfsec/sim/topology.hpp"

namespace sfsec::sim {

struct RestartSpec {
  std::uint8_t node = 0;
  /// The node reboots at the boundary of this simulated epoch.
  std::uint64_t epoch = 0;
  /// Whether the EC survives in non-volatile storage.
  bool persist = true;
  /// The stored record fails its integrity check on reload.
  bool corrupt_store = false;
};

/// Node powered off until `epoch`, then comes up unjoined.
struct LateJoin {
  std::uint8_t node = 0;
  std::uint64_t epoch = 0;
};

struct SimConfig {
  Topology topology;
  LinkParams link;
  framing::PhyTable phy_table = framing::PhyTable::defaults();
  framing::PhyMode phy = framing::PhyMode::k1Mbps;
  protocol::SecurityMode security = protocol::SecurityMode::kOn;
  protocol::EpochSchedule schedule;
  protocol::TimingParams timing;
  std::uint64_t epochs = 10;
  std::uint64_t seed = 1;

  /// Uniform per-node drift in [-max, +max] ppm, unless overridden.
  double drift_ppm_max = 0.0;
  std::map<std::uint8_t, std::int64_t> drift_ppb;
  std::map<std::uint8_t, std::int64_t> clock_offset_ns;
  /// Re-anchor on every authenticated reception; otherwise only on the first
  /// one of each epoch.
  bool resync_per_hop = true;
  Duration rx_guard = 50us;
  crypto::CcmMode ccm_mode = crypto::CcmMode::kHardware;
  ReceptionParams reception;
  std::uint32_t desync_after = 3;
  std::uint8_t guarantee_period = 4;

  /// Nodes start provisioned: joined, synchronised, EC = initial_ec.
  bool start_joined = true;
  std::uint64_t initial_ec = 0;
  std::vector<RestartSpec> restarts;
  std::vector<LateJoin> late_joins;
  /// EC records go to <state_dir>/node_<id>.ec when set; in memory otherwise.
  std::optional<std::filesystem::path> state_dir;

  crypto::NonceLedger::Policy ledger_policy = crypto::NonceLedger::Policy::kRecord;
  std::uint64_t network_key_label = 0x5ec0de;
  std::uint64_t device_key_label = 0xde71ce;
  /// Holders of the device key; every honest node when unset.
  std::optional<std::set<std::uint8_t>> device_key_holders;

  /// Keep payload bytes in delivery and transmit logs.
  bool keep_payloads = false;
  /// Collect an NDJSON event log.
  bool event_log = false;
};

/// A payload an honest node handed to its application.
struct Delivery {
  std::uint64_t epoch = 0;
  std::uint64_t ec = 0;
  std::uint16_t pc = 0;
  std::uint8_t origin = 0;
  std::uint8_t slot = 0;
  /// Fingerprint of the PDU body (inner ciphertext when the device layer is on).
  std::uint64_t body_fingerprint = 0;
  /// Body equals what the honest initiator sent in this epoch and phase.
  bool genuine = false;
  /// Device-key layer opened (always true when the layer is off).
  bool inner_ok = true;
  Bytes payload;
};

/// An honest initiator's data flood, as sent.
struct TxRecord {
  std::uint64_t epoch = 0;
  std::uint64_t ec = 0;
  std::uint16_t pc = 0;
  std::uint8_t origin = 0;
  /// Application plaintext before any encryption.
  Bytes plaintext;
  /// PDU body on air inside the outer layer.
  Bytes body;
  /// The slot-0 frame.
  Bytes frame;
};

struct MonitorRecord {
  std::uint64_t epoch = 0;
  std::uint16_t pc = 0;
  std::uint8_t slot = 0;
  std::uint8_t monitor = 0;
  RxResult result = RxResult::kErased;
  std::uint32_t transmitters = 0;
};

struct NodeStats {
  std::uint8_t id = 0;
  NodeRole role = NodeRole::kHonest;
  std::uint64_t expected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t forged_deliveries = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t ind_received = 0;
  std::uint64_t ind_rejected = 0;
  std::uint64_t desyncs = 0;
  std::optional<std::uint64_t> join_epoch;
  std::array<std::uint64_t, kRxResultCount> outcomes{};
  std::uint64_t final_ec = 0;
  bool final_joined = false;

  double per() const { return expected == 0 ? 0.0 : 1.0 - static_cast<double>(delivered) / expected; }
};

struct SimResult {
  std::vector<NodeStats> nodes;
  std::array<std::uint64_t, kRxResultCount> outcome_histogram{};
  /// Per node index: deliveries in order.
  std::vector<std::vector<Delivery>> deliveries;
  std::vector<TxRecord> tx_log;
  std::vector<MonitorRecord> monitor_log;
  /// delivered[node index][epoch * data_phases + phase - 1]: 1 if a genuine
  /// payload was delivered in that flood.
  std::vector<std::vector<std::uint8_t>> delivered_matrix;
  std::uint64_t data_phases = 0;
  std::uint64_t ind_reuse = 0;
  std::uint64_t mp2p_reuse = 0;
  std::uint64_t violations = 0;
  std::uint64_t confidentiality_losses = 0;
  std::vector<crypto::ReuseEvent> reuse_samples;
  std::uint64_t events_processed = 0;
  std::vector<std::string> event_log;

  const NodeStats& node(std::uint8_t id) const;
};

// ---- adversary hooks ----

struct SlotContext {
  std::uint64_t epoch = 0;
  /// Network EC of this epoch as the timekeeper uses it.
  std::uint64_t ec = 0;
  std::uint16_t pc = 0;
  std::uint8_t slot = 0;
  std::uint8_t channel = 0;
  /// True time the timekeeper's schedule puts this slot at.
  SimTime start{};
  const protocol::PhaseTiming* timing = nullptr;
  const protocol::PhaseSpec* spec = nullptr;
};

/// A frame an attacker position captured with its own radio.
struct Overheard {
  SlotContext ctx;
  std::uint8_t position = 0;
  RxResult result = RxResult::kErased;
  Bytes frame;
};

struct Injection {
  std::uint8_t position = 0;
  Bytes frame;
  /// Start relative to the slot's nominal time.
  Duration offset{0};
  std::optional<std::uint8_t> channel;
};

/// A transmission as it starts, visible to an omniscient attacker.
struct AirEvent {
  SlotContext ctx;
  std::uint8_t transmitter = 0;
  SimTime start{};
  std::uint8_t channel = 0;
  const Bytes* frame = nullptr;
  bool honest = true;
};

class AttackerHook {
 public:
  virtual ~AttackerHook() = default;
  virtual void on_overheard(const Overheard&) {}
  virtual void on_air(const AirEvent&, std::vector<Injection>&) {}
  virtual void inject(const SlotContext&, std::vector<Injection>&) {}
};

class Engine {
 public:
  /// Throws std::invalid_argument or protocol::EpochOverrun on a bad config.
  explicit Engine(SimConfig config, AttackerHook* hook = nullptr);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimResult run();

  const SimConfig& config() const;
  const LinkTable& links() const;
  const std::vector<protocol::PhaseTiming>& timings() const;
  const crypto::Key128& network_key() const;
  const crypto::Key128& device_key() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper.
SimResult run_simulation(const SimConfig& config, AttackerHook* hook = nullptr);

}  // namespace sfsec::sim
