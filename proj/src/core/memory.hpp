// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace usim {

enum class RegionKind : u8 { sram, flash, tcm_stack, tcm_table, mmio };

/// Bus masters in fixed arbitration priority order (highest first):
/// ctx_engine > table_loader > core_data > core_fetch. Register stacking is
/// the longest transfer of an interrupt entry, so the context engine must
/// never be starved once it asks for the port.
enum class Requester : u8 { ctx_engine = 0, table_loader, core_data, core_fetch };

/// The three physical ports. SRAM, flash and MMIO share the main port; each
/// TCM, when configured, has a dedicated one.
enum class PortId : u8 { main = 0, tcm_stack = 1, tcm_table = 2 };
constexpr unsigned kNumPorts = 3;

/// Memory-mapped device. `read`/`write` receive the region-relative offset
/// and the cycle at which the data phase completes on the bus.
class MmioDevice {
 public:
  virtual ~MmioDevice() = default;
  virtual u32 mmio_read(u32 offset, unsigned width, u64 at_cycle) = 0;
  virtual void mmio_write(u32 offset, unsigned width, u32 value, u64 at_cycle) = 0;
  /// Extra data-phase wait cycles for a register (0 for plain registers).
  virtual u32 extra_wait(u32 /*offset*/) const { return 0; }
};

struct Region {
  u32 base = 0;
  u32 size = 0;
  RegionKind kind = RegionKind::sram;
  u32 beat_cycles = 1;  // data cycles per bus beat
  MmioDevice* device = nullptr;
  std::vector<u8> bytes;  // backing store (empty for mmio)

  bool contains(u32 addr, u32 len = 1) const {
    return addr >= base && addr + len - 1 <= base + (size - 1) && len <= size;
  }
  PortId port() const {
    switch (kind) {
      case RegionKind::tcm_stack: return PortId::tcm_stack;
      case RegionKind::tcm_table: return PortId::tcm_table;
      default: return PortId::main;
    }
  }
};

/// One bus transfer request.
struct PortRequest {
  Requester who = Requester::core_data;
  u32 addr = 0;
  u32 words = 1;       // whole words moved by the transaction
  bool is_write = false;
  u64 issue_cycle = 0;
  u32 lead_cycles = 0;  // engine-internal startup charged inside the hold
  u32 seq = 0;          // submission order, used as the FIFO tie-break
};

struct PortGrant {
  u64 start = 0;     // cycle the port is acquired
  u64 complete = 0;  // cycle the last data beat finishes
  u64 stall = 0;     // start - issue_cycle
};

/// Deterministic grant order for a set of requests contending for one port:
/// priority class first, then FIFO by issue cycle, then submission order.
std::vector<PortRequest> arbitrate(std::vector<PortRequest> pending);

/// Record of a committed data-side access, kept when auditing is on.
struct CommitRecord {
  u64 cycle = 0;
  u32 addr = 0;
  unsigned width = 0;
  bool is_write = false;
  u32 value = 0;
  Mode mode = Mode::machine;
  Requester who = Requester::core_data;
};

/// Cycle-charging memory front end: address decode, per-port occupancy,
/// per-requester beat widths, and MMIO dispatch.
class MemorySystem {
 public:
  MemorySystem();

  void add_region(Region r);
  const Region* find(u32 addr) const;
  bool has_port(PortId p) const { return port_present_[unsigned(p)]; }
  void set_port_present(PortId p, bool on) { port_present_[unsigned(p)] = on; }

  /// Words per data beat for a requester. The table loader moves four words
  /// per beat, the context engine two, the core one.
  u32 beat_words(Requester who) const;
  void set_beat_words(Requester who, u32 words);

  /// Schedule one transaction; the port is held for
  /// lead + 1 address cycle + ceil(words/beat_words)*beat_cycles.
  PortGrant transfer(const PortRequest& req);

  /// Duration such a transaction would take on an idle port.
  u64 transfer_duration(Requester who, u32 addr, u32 words, u32 lead = 0) const;

  u64 port_free_at(PortId p) const { return port_free_[unsigned(p)]; }
  void reset_ports();

  // Untimed accessors used by loaders, hardware engines and tests.
  u32 peek32(u32 addr) const;
  u16 peek16(u32 addr) const;
  u8 peek8(u32 addr) const;
  void poke32(u32 addr, u32 value);
  void poke16(u32 addr, u16 value);
  void poke8(u32 addr, u8 value);

  /// Timed data-side access on behalf of the core. Returns the loaded value
  /// (zero-extended) and the completion cycle. MMIO routes to the device
  /// with the completion cycle. Unmapped addresses return nullopt.
  struct DataResult {
    u32 value = 0;
    u64 complete = 0;
  };
  std::optional<DataResult> data_access(u32 addr, unsigned width, bool is_write,
                                        u32 store_value, u64 issue_cycle,
                                        Mode mode);

  void load_image(u32 origin, const std::vector<u32>& words);

  void set_audit(bool on) { audit_ = on; commits_.clear(); }
  const std::vector<CommitRecord>& commits() const { return commits_; }

  /// Transfer log for conservation checks (always on; cheap).
  struct TransferRecord {
    Requester who;
    PortId port;
    u64 issue, start, complete;
    u32 words;
  };
  const std::vector<TransferRecord>& transfers() const { return transfers_; }
  void clear_transfers() { transfers_.clear(); }
  void set_log_transfers(bool on) { log_transfers_ = on; }

 private:
  Region* find_mut(u32 addr);

  std::vector<std::unique_ptr<Region>> regions_;
  u64 port_free_[kNumPorts] = {0, 0, 0};
  bool port_present_[kNumPorts] = {true, false, false};
  u32 beat_words_[4] = {2, 4, 1, 1};  // indexed by Requester
  bool audit_ = false;
  bool log_transfers_ = false;
  std::vector<CommitRecord> commits_;
  std::vector<TransferRecord> transfers_;
};

}  // namespace usim
