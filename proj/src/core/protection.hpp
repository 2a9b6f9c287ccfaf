// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "core/memory.hpp"
#include "core/types.hpp"

namespace usim {

enum class Access : u8 { read, write, exec };

constexpr u8 kPermR = 1 << 0;
constexpr u8 kPermW = 1 << 1;
constexpr u8 kPermX = 1 << 2;

/// One protection segment: [base, limit) with a permission subset.
/// Base and limit are 4-byte aligned; an empty range never matches.
struct PmpEntry {
  u32 base = 0;
  u32 limit = 0;  // exclusive
  u8 perms = 0;

  bool covers(u32 addr, u32 len) const {
    return limit > base && addr >= base && addr < limit && len <= limit - addr;
  }
};

/// The active PMP configuration: a fixed array of K entries. K is the same
/// for every set in a machine and is bounded by the packed-permission word
/// of the in-memory record format (one nibble per entry).
struct PmpSet {
  std::vector<PmpEntry> entries;
  i32 owner = -1;

  bool operator==(const PmpSet& other) const;
};

constexpr unsigned kMaxPmpEntries = 8;

/// Words occupied by one in-memory PMP record: K (base, limit) pairs then
/// one packed-permission word, nibble i = perms of entry i.
constexpr u32 pmp_record_words(unsigned k) { return 2 * k + 1; }

/// Serialize/deserialize the fixed record format.
std::vector<u32> pack_pmp_record(const PmpSet& set, unsigned k);
PmpSet unpack_pmp_record(const std::vector<u32>& words, unsigned k);

/// PMP permission checking plus the cycle-accounted set loader and the
/// kernel-managed shadow bank.
class PmpUnit {
 public:
  explicit PmpUnit(unsigned k) : k_(k) {
    if (k == 0 || k > kMaxPmpEntries)
      throw ConfigError("pmp_entries must be in [1,8]");
    active_.entries.resize(k);
  }

  unsigned k() const { return k_; }

  /// Machine mode bypasses PMP; user mode is allowed iff some entry covers
  /// the full access with the required permission. Deny is a value, never
  /// an error: the caller decides between trap and forced return.
  bool check(u32 addr, u32 len, Access acc, Mode mode) const;

  const PmpSet& active() const { return active_; }
  void install(const PmpSet& set);

  /// Read a packed record from memory through `port` semantics (the record
  /// address selects the port) and install it. Returns the bus grant so the
  /// caller can fold the cycles into its schedule.
  PortGrant load_record(MemorySystem& mem, u32 record_addr, u64 issue_cycle);

  /// Write the active set out as a packed record (spill-mode kernel PMP).
  PortGrant store_record(MemorySystem& mem, u32 record_addr, u64 issue_cycle);

  /// Zero-cycle shadow save/restore of the kernel-managed set.
  /// save requires the shadow to be empty, restore requires it full;
  /// violations are engine sequencing bugs and throw.
  void shadow_save();
  void shadow_restore();
  bool shadow_valid() const { return shadow_valid_; }

 private:
  unsigned k_;
  PmpSet active_;
  PmpSet shadow_;
  bool shadow_valid_ = false;
};

}  // namespace usim
