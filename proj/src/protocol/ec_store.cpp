// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/protocol/ec_store.hpp"

#include <array>
#include <fstream>
#include <limits>

namespace sfsec::protocol {

std::optional<std::uint64_t> MemoryEcStore::load() const {
  if (corrupt_) throw StoreCorrupt("EC record failed its integrity check");
  return value_;
}

std::optional<std::uint64_t> FileEcStore::load() const {
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) return std::nullopt;
  std::ifstream in(path_, std::ios::binary);
  std::array<char, 9> buf{};
  in.read(buf.data(), buf.size());
  if (in.gcount() != 8) throw StoreCorrupt("EC record " + path_.string() + " is not 8 bytes");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(buf[i]);
  return v;
}

void FileEcStore::save(std::uint64_t ec) {
  std::array<char, 8> buf{};
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(ec >> (8 * i));
  const auto tmp = path_.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(buf.data(), buf.size());
  }
  std::filesystem::rename(tmp, path_);
}

void FileEcStore::wipe() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

std::uint64_t restore_ec(const EcStore& store) {
  const auto last = store.load();
  if (!last) return 0;
  if (*last == std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("epoch counter exhausted");
  return *last + 1;
}

}  // namespace sfsec::protocol
