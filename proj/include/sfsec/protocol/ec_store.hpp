// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>

namespace sfsec::protocol {

class StoreCorrupt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-volatile epoch-counter record.
class EcStore {
 public:
  virtual ~EcStore() = default;
  /// nullopt when nothing was ever written. Throws StoreCorrupt.
  virtual std::optional<std::uint64_t> load() const = 0;
  virtual void save(std::uint64_t ec) = 0;
  /// Forget everything, as if the flash had been erased.
  virtual void wipe() = 0;
};

class MemoryEcStore final : public EcStore {
 public:
  std::optional<std::uint64_t> load() const override;
  void save(std::uint64_t ec) override {
    value_ = ec;
    corrupt_ = false;
  }
  void wipe() override {
    value_.reset();
    corrupt_ = false;
  }
  void corrupt() { corrupt_ = true; }

 private:
  std::optional<std::uint64_t> value_;
  bool corrupt_ = false;
};

/// One little-endian u64 in a file.
class FileEcStore final : public EcStore {
 public:
  explicit FileEcStore(std::filesystem::path path) : path_(std::move(path)) {}
  std::optional<std::uint64_t> load() const override;
  void save(std::uint64_t ec) override;
  void wipe() override;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// EC to use after a restart: one past the last persisted value, so it is
/// larger than anything used before. 0 for an empty store. Throws StoreCorrupt,
/// and std::overflow_error when the counter space is exhausted.
std::uint64_t restore_ec(const EcStore& store);

}  // namespace sfsec::protocol
