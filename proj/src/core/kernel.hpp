// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/devices.hpp"
#include "core/machine.hpp"
#include "core/protection.hpp"
#include "core/uintr.hpp"

namespace usim {

enum class SchemeKind : u8 { ext, kernel, intel, software };

/// Delivery-path cost constants for the emulated baseline schemes. The
/// extension scheme has no constants here: its latency is the composed
/// entry schedule.
struct SchemeConfig {
  SchemeKind kind = SchemeKind::ext;
  u32 kernel_path = 634;         // nominal kernel mediation path
  u32 kernel_entry_extra = 205;  // probe-visible extras on top of the path
  u32 kernel_return = 760;       // kernel-mediated return path
  u32 intel_fast = 40;           // bypass path when the target is active
  u32 intel_fast_return = 30;
  u32 software_path = 120;       // software prologue incl. PMP reconfig
  u32 software_pmp_part = 30;    // portion of the prologue spent on PMP
  u32 software_return = 110;
};

const char* scheme_name(SchemeKind k);
std::optional<SchemeKind> scheme_by_name(const std::string& s);

struct BudgetPolicy {
  u32 capacity = 0;  // cycles per period
  u32 period = 0;    // replenishment period, cycles

  void validate() const {
    if (capacity == 0 || period == 0 || capacity > period)
      throw ConfigError("budget policy requires 0 < capacity <= period");
  }
};

enum class SysStatus : i32 {
  ok = 0,
  eperm = -1,
  enoent = -2,
  eexist = -3,
  enospc = -4,
  einval = -5,
  ebusy = -6,
};

enum class ThreadState : u8 { ready, running, blocked };

struct Thread {
  u32 id = 0;
  u32 proc = 0;
  std::array<u32, 31> regs{};
  u32 pc = 0;
  ThreadState state = ThreadState::ready;
};

struct Process {
  u32 id = 0;
  PmpSet domain;               // kernel-managed PMP while its threads run
  u32 pmp_record_addr = 0;     // shared handler record, 0 until first int_reg
  int pmp_record_refs = 0;
  std::vector<u32> threads;
  std::vector<u32> capabilities;  // interrupt numbers it may register

  bool may_register(u32 int_num) const {
    for (u32 c : capabilities)
      if (c == int_num) return true;
    return false;
  }
};

struct Registration {
  u32 handle = 0;
  u32 proc = 0;
  u32 int_num = 0;
  u32 entry_pc = 0;
  BudgetPolicy policy;
  u32 pmp_ptr = 0;
  u32 budget_ptr = 0;
  int cam_idx = -1;
  bool enabled = false;
  u64 next_replenish = 0;
};

/// Static layout of the kernel-managed tables inside the memory map.
struct KernelLayout {
  u32 iid_table = 0;       // table-mode IID records (ignored in CAM mode)
  u32 iid_entries = 32;    // interrupt numbers covered by the table
  u32 budget_area = 0;     // budget records, 16 bytes each
  u32 budget_slots = 64;
  u32 pmp_area = 0;        // PMP records, 80-byte stride (in the table port)
  u32 pmp_slots = 32;
  u32 kernel_pmp_spill = 0;
  u32 hw_stack_base = 0;   // muistk
};

/// Minimal microkernel model: PMP-backed processes, round-robin threads,
/// the five-call user-interrupt API and deferrable-server replenishment.
/// Syscalls execute synchronously in simulated machine mode; the simulator
/// charges their window cost.
class KernelModel {
 public:
  KernelModel(MachineState& st, MemorySystem& mem, PmpUnit& pmp,
              UintrEngine* engine, const KernelLayout& layout);

  /// Program the extension CSRs, zero the tables and arm replenishment.
  void boot_init(bool enable_extension);

  // ---- process / thread management (harness-level API) ----
  u32 create_process(const PmpSet& domain, std::vector<u32> capabilities);
  u32 create_thread(u32 proc, u32 entry_pc, u32 sp);
  void block_thread(u32 tid);
  void unblock_thread(u32 tid);
  Process& process(u32 id);
  Thread& thread(u32 id);

  // ---- the user-interrupt system API ----
  struct RegResult {
    SysStatus status = SysStatus::ok;
    u32 handle = 0;
  };
  RegResult int_reg(u32 proc, u32 int_num, u32 entry_pc,
                    const BudgetPolicy& policy);
  SysStatus int_del(u32 handle);
  SysStatus int_prio(u32 handle, u8 prio);
  SysStatus int_ena(u32 handle);
  SysStatus int_dis(u32 handle);

  const Registration* registration(u32 handle) const;
  const Registration* registration_for(u32 int_num) const;

  /// Handler entry pc for a registered source (the interrupt vector table).
  std::optional<u32> vector(u32 int_num) const;

  /// Deferrable-server replenishment: every policy period the budget is
  /// reset to full capacity. Returns the next due cycle (kNoEvent if none).
  u64 replenish_tick(u64 now);
  u64 next_replenish() const;

  /// Nominal delivery-path cost in cycles for a scheme (the extension cost
  /// is the idle-machine entry schedule).
  u64 deliver(const SchemeConfig& scheme, const VariantConfig& vc,
              u32 int_num, bool target_active) const;

  // ---- scheduling ----
  /// Threads currently runnable.
  unsigned ready_count() const;
  bool has_running() const { return running_ != 0; }
  u32 running_thread() const { return running_; }
  u32 running_process() const;
  /// Pick the next thread round-robin; saves/restores register contexts and
  /// installs the next process domain. Returns false if nothing is ready.
  bool switch_to_next();
  /// First dispatch at boot.
  bool dispatch_first();

  /// Syscall entry from a trapped `ecall`: a7 = call number, a0..a3 args,
  /// result in a0.
  void handle_ecall();

  const KernelLayout& layout() const { return layout_; }

 private:
  u32 alloc_pmp_record(Process& p);
  u32 alloc_budget_record(const BudgetPolicy& policy);
  void save_running();
  void load_thread(Thread& t);

  MachineState& st_;
  MemorySystem& mem_;
  PmpUnit& pmp_;
  UintrEngine* engine_;
  KernelLayout layout_;

  std::map<u32, Process> procs_;
  std::map<u32, Thread> threads_;
  std::map<u32, Registration> regs_;
  std::vector<u32> rr_queue_;
  u32 running_ = 0;
  u32 next_proc_id_ = 1;
  u32 next_thread_id_ = 1;
  u32 next_handle_ = 1;
  u32 next_budget_slot_ = 0;
  u32 next_pmp_slot_ = 0;
  u64 next_replenish_ = kNoEvent;
};

}  // namespace usim
