// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/experiment/compare.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

namespace sfsec::experiment {

double analytic_delta(double ber, std::size_t payload_bytes) {
  const double l = static_cast<double>(payload_bytes);
  return std::pow(1.0 - ber, 8.0 * l) - std::pow(1.0 - ber, 8.0 * (l + 5.0));
}

std::vector<CsvRow> to_rows(const std::vector<RunResult>& results) {
  std::vector<CsvRow> rows;
  for (const auto& r : results)
    for (const auto& n : r.nodes)
      rows.push_back({r.run_id, r.seed, std::string(framing::to_string(r.cell.phy)), r.cell.payload,
                      std::string(protocol::to_string(r.cell.encryption)), n.node_id, n.hops_from_source, n.expected,
                      n.delivered, n.per()});
  return rows;
}

namespace {

double exact_per(const CsvRow& r) {
  return r.expected == 0 ? 0.0 : 1.0 - static_cast<double>(r.delivered) / static_cast<double>(r.expected);
}

}  // namespace

std::vector<DeltaRow> compare_encrypted_delta(const std::vector<CsvRow>& rows,
                                              const std::function<std::optional<double>(const std::string&)>& ber_by_phy) {
  using Key = std::tuple<std::string, std::uint16_t, std::uint64_t, std::uint8_t>;
  std::map<Key, const CsvRow*> plain;
  for (const auto& r : rows)
    if (r.encryption == "off") plain[{r.phy, r.payload, r.seed, r.node_id}] = &r;

  struct Acc {
    std::vector<double> deltas, p, s;
  };
  std::map<std::tuple<std::string, std::uint16_t, std::string>, Acc> groups;
  std::vector<std::tuple<std::string, std::uint16_t, std::string>> order;
  for (const auto& r : rows) {
    if (r.encryption == "off" || r.expected == 0) continue;
    const auto it = plain.find({r.phy, r.payload, r.seed, r.node_id});
    if (it == plain.end())
      throw MissingPair("no unencrypted run for " + r.run_id + " node " + std::to_string(r.node_id));
    const auto g = std::make_tuple(r.phy, r.payload, r.encryption);
    if (!groups.count(g)) order.push_back(g);
    auto& acc = groups[g];
    acc.p.push_back(exact_per(*it->second));
    acc.s.push_back(exact_per(r));
    acc.deltas.push_back(acc.s.back() - acc.p.back());
  }

  std::vector<DeltaRow> out;
  for (const auto& g : order) {
    const auto& acc = groups[g];
    DeltaRow d;
    std::tie(d.phy, d.payload, d.encryption) = g;
    d.pairs = acc.deltas.size();
    d.per_plain = mean(acc.p);
    d.per_secure = mean(acc.s);
    d.delta = mean_ci95(acc.deltas);
    if (ber_by_phy)
      if (auto ber = ber_by_phy(d.phy)) d.analytic = analytic_delta(*ber, d.payload);
    out.push_back(d);
  }
  return out;
}

std::string format_report(const std::vector<DeltaRow>& rows) {
  std::ostringstream ss;
  ss << "phy,payload_bytes,encryption,pairs,per_off,per_enc,delta,ci_low,ci_high,analytic_hop_delta\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%u,%s,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,", r.phy.c_str(),
                  static_cast<unsigned>(r.payload), r.encryption.c_str(), r.pairs, r.per_plain, r.per_secure,
                  r.delta.mean, r.delta.low, r.delta.high);
    ss << buf;
    if (r.analytic) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.analytic);
      ss << buf;
    }
    ss << '\n';
  }
  return ss.str();
}

}  // namespace sfsec::experiment
