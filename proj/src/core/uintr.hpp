// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "core/machine.hpp"
#include "core/memory.hpp"
#include "core/protection.hpp"
#include "core/variant.hpp"

namespace usim {

/// Hardware-visible mapping from an interrupt number to its protection
/// domains. In table mode this is a 4-word memory record
/// {enabled, int_num, pmp_ptr, budget_ptr} indexed by interrupt number;
/// in CAM mode it lives in the iidnumX/iidpmpX/iidtimX register triplets.
struct IidEntry {
  bool enabled = false;
  u32 int_num = 0;
  u32 pmp_ptr = 0;
  u32 budget_ptr = 0;
};

/// In-memory budget record: {remaining, granted, policy_ref, reserved}.
struct BudgetEntry {
  u32 remaining = 0;
  u32 granted = 0;
  u32 policy_ref = 0;
};

enum class SegAction : u8 {
  ack,
  iid_lookup,
  pmp_load,
  budget_load,
  ctx_save,
  redirect,
  budget_writeback,
  pmp_spill,
  pmp_restore,
  budget_reload,
  ctx_restore,
};

const char* seg_action_name(SegAction a);

/// One hardware action with its cycle interval; port < 0 means the action
/// does not occupy a bus port.
struct Segment {
  SegAction action;
  u64 start = 0;
  u64 end = 0;
  int port = -1;
};

/// The per-entry timeline of parallel hardware actions including
/// arbitration stalls. `total` is the entry latency in cycles.
struct EntrySchedule {
  std::vector<Segment> segments;
  u64 total = 0;

  const Segment* find(SegAction a) const {
    for (auto& s : segments)
      if (s.action == a) return &s;
    return nullptr;
  }
};

constexpr u32 kCamEmpty = 0xffffffffu;

/// The extension engine: IID lookup, entry scheduling with contention,
/// register banking/spilling with zeroization, budget countdown with
/// write-back, forced return and nesting.
class UintrEngine {
 public:
  UintrEngine(const VariantConfig& vc, MemorySystem& mem, PmpUnit& pmp,
              MachineState& st);

  const VariantConfig& variant() const { return vc_; }

  // ---- IID ----
  struct Lookup {
    bool hit = false;
    u32 pmp_ptr = 0;
    u32 budget_ptr = 0;
    u64 cycles = 0;
  };
  /// Timed lookup: one indexed bus read in table mode, combinational
  /// (zero cycles) in CAM mode. A miss is the backward-compatible path.
  Lookup iid_lookup(u32 int_num, u64 now);
  /// Untimed variant used for delivery decisions.
  Lookup iid_probe(u32 int_num) const;

  u32 iid_record_addr(u32 int_num) const;

  /// CAM register window: field 0 = iidnum, 1 = iidpmp, 2 = iidtim.
  void cam_write(unsigned idx, unsigned field, u32 value);
  u32 cam_read(unsigned idx, unsigned field) const;
  unsigned cam_capacity() const { return vc_.cam_entries; }
  /// Kernel-side CAM slot allocation helper; returns entry index or -1.
  int cam_alloc(u32 int_num, u32 pmp_ptr, u32 budget_ptr);
  void cam_free(unsigned idx);

  void set_source_enabled(u32 int_num, bool on);
  bool source_enabled(u32 int_num) const;

  void set_priority(u32 int_num, u8 prio);
  u8 priority(u32 int_num) const;

  // ---- entry / return ----
  /// Full entry: acknowledge, IID lookup, the parallel phase (PMP load,
  /// budget load, context save) with arbitration stalls, pipeline redirect.
  /// Installs the handler protection domain, zeroizes the register file and
  /// starts the budget countdown. The caller redirects the pc afterwards.
  EntrySchedule enter(u32 int_num, CtxKind preempted, u32 preempted_pc,
                      Mode preempted_mode, u64 now);

  struct ReturnResult {
    EntrySchedule schedule;
    u32 resume_pc = 0;
    Mode resume_mode = Mode::machine;
    CtxKind resumed_kind = CtxKind::thread;
    u32 resumed_int_num = 0;
  };
  /// Normal return: budget write-back, PMP and register context restore,
  /// pipeline redirect. Requires an active handler.
  ReturnResult ret(u64 now);
  /// Forced return: identical restore path with the cause recorded first.
  ReturnResult force_return(u32 cause, u64 now);

  // ---- budget countdown ----
  /// Consume up to `cost` cycles from the active budget; returns the cycles
  /// actually available before exhaustion.
  u64 consume_budget(u64 cost);
  u64 active_remaining() const;
  u64 active_consumed() const;
  /// Kernel replenishment. Applied immediately when the entry is idle and
  /// deferred to the next write-back while its handler owns the countdown.
  void replenish(u32 budget_ptr, u32 capacity);

  bool handler_active() const { return !nest_.empty(); }
  unsigned nest_depth() const { return static_cast<unsigned>(nest_.size()); }
  u32 active_int_num() const;
  u8 active_prio() const;
  CtxKind outermost_preempted() const;

  void write_muistk(u32 base);
  u32 stack_top() const { return stack_top_; }
  unsigned free_banks() const;

 private:
  struct NestLevel {
    u32 int_num = 0;
    u32 pmp_ptr = 0;
    u32 budget_ptr = 0;
    u64 remaining = 0;
    u64 consumed = 0;
    CtxKind preempted = CtxKind::thread;
    bool spilled = false;
    u32 frame_addr = 0;
    unsigned prev_bank = 0;  // valid when !spilled
  };

  struct CamSlot {
    bool valid = false;
    bool enabled = false;
    u32 int_num = kCamEmpty;
    u32 pmp_ptr = 0;
    u32 budget_ptr = 0;
  };

  u32 pack_status(CtxKind kind, Mode mode, u32 int_num) const;
  void unpack_status(u32 status, CtxKind& kind, Mode& mode, u32& int_num) const;
  void check_stack_room() const;
  bool budget_running(u32 budget_ptr) const;

  VariantConfig vc_;
  MemorySystem& mem_;
  PmpUnit& pmp_;
  MachineState& st_;

  std::vector<CamSlot> cam_;
  std::map<u32, u8> prio_;
  std::vector<NestLevel> nest_;
  std::vector<bool> bank_busy_;
  u32 stack_top_ = 0;
  u32 stack_base_ = 0;
  std::map<u32, u32> pending_replenish_;
  u32 kernel_pmp_spill_addr_ = 0;

 public:
  void set_kernel_pmp_spill_addr(u32 a) { kernel_pmp_spill_addr_ = a; }
};

}  // namespace usim
