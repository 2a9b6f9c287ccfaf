// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/assembler.hpp"
#include "core/devices.hpp"
#include "core/kernel.hpp"
#include "core/machine.hpp"
#include "core/memory.hpp"
#include "core/protection.hpp"
#include "core/uintr.hpp"
#include "core/variant.hpp"

namespace usim {

/// Per-instruction cycle costs of the 3-stage core. Branches use static
/// prediction: backward conditional branches are predicted taken, forward
/// ones not taken; a misprediction refills the pipeline.
struct CoreTiming {
  u64 hz = 50'000'000;
  u32 branch_penalty = 2;
  u32 mul_cycles = 1;
  u32 div_cycles = 33;
  u32 trap_entry = 5;        // kernel-level trap/interrupt entry, to fetch
  u32 syscall_window = 150;  // kernel syscall service time
  u32 switch_window = 750;   // thread context-switch path
  u32 quantum = 10000;       // round-robin slice in system-timer cycles
};

struct MemLayoutCfg {
  u32 flash_base = 0x08000000, flash_size = 0x40000;
  u32 sram_base = 0x20000000, sram_size = 0x20000;
  u32 tcm_stack_base = 0x30000000, tcm_stack_size = 0x2000;
  u32 tcm_table_base = 0x31000000, tcm_table_size = 0x2000;
  u32 flash_beat = 2, sram_beat = 1, tcm_beat = 1, mmio_beat = 2;
};

struct SimOptions {
  VariantConfig variant;
  SchemeConfig scheme;
  CoreTiming core;
  MemLayoutCfg mem;
  bool extension_enabled = true;  // muictl bit0 programmed at boot
  bool with_kernel = true;
  bool with_devices = true;
  bool trace_retired = false;
  bool audit_commits = false;
  bool log_activations = false;
  u32 sensor_wait = 6;
};

struct TraceEntry {
  u64 cycle;
  u32 pc;
  u32 raw;

  bool operator==(const TraceEntry&) const = default;
};

/// One handler activation, for sustainability and isolation audits.
struct Activation {
  u32 irq = 0;
  u64 assert_cycle = 0;
  u64 start_cycle = 0;    // first handler instruction executes
  u64 return_done = 0;    // preempted context resumes
  u32 forced_cause = 0;   // 0 = normal return
  bool returned = false;
  u64 mtime_entry = 0;    // system timer at delivery
  u64 mtime_return = 0;   // system timer when the preempted context resumes
};

enum class CsrOp : u8 { read, write, set, clear };

/// One simulation instance: a machine, its memory system, the optional
/// extension engine, the kernel model, and the device block. Instances
/// share nothing; stepping is single-threaded and deterministic.
class Simulator {
 public:
  explicit Simulator(const SimOptions& opts);

  MachineState& state() { return st_; }
  MemorySystem& mem() { return mem_; }
  PmpUnit& pmp() { return pmp_; }
  UintrEngine* engine() { return engine_.get(); }
  KernelModel* kernel() { return kernel_.get(); }
  DeviceBlock& devices() { return devs_; }
  const SimOptions& options() const { return opts_; }
  const KernelLayout& layout() const { return klayout_; }

  void load_program(const ProgramImage& img) {
    mem_.load_image(img.origin, img.words);
  }

  /// Read-modify-write CSR access with privilege checking. Returns the old
  /// value, or nullopt when the access raises an exception (the trap is
  /// applied to the machine state).
  std::optional<u32> csr_access(u16 csr, CsrOp op, u32 value);

  /// Raise an external interrupt line by number (test sources).
  void raise_irq(u32 irq);

  /// Handler vector for engine-level tests that run without the kernel.
  void set_test_vector(u32 irq, u32 pc) { test_vectors_[irq] = pc; }

  /// Run until `halted()` or the cycle limit.
  void run(u64 cycle_limit);
  bool step();

  bool halted() const { return halted_; }
  const std::string& halt_reason() const { return halt_reason_; }

  u64 cycle() const { return st_.cycle; }
  /// System timer value: wall cycles minus time spent in extension handler
  /// activations (it pauses while a handler owns the core).
  u64 mtime() const;

  bool in_handler() const;
  /// True while the kernel model is executing (syscall, context switch or
  /// baseline-scheme mediation).
  bool kernel_busy() const { return window_ != WindowKind::none; }
  u64 retired() const { return retired_; }

  const std::vector<TraceEntry>& trace() const { return trace_; }
  const std::vector<Activation>& activations() const { return activations_; }
  std::vector<Activation>& activations_mut() { return activations_; }

  /// Lost device fires (an edge arrived while the same line was pending).
  u64 dropped_fires() const { return dropped_fires_; }

 private:
  struct Pending {
    u64 assert_cycle;
  };
  enum class WindowKind : u8 {
    none,
    syscall,
    sched_switch,
    scheme_entry,
    scheme_return
  };

  void build_memory();
  void pump_devices();
  bool try_deliver();
  void deliver_ext(u32 irq, u64 assert_cycle);
  void deliver_scheme(u32 irq, u64 assert_cycle);
  void deliver_machine_irq(u32 irq);
  void advance_window();
  void finish_window();
  void start_window(WindowKind kind, u64 duration);
  void exec_one();
  void do_uintr_return(std::optional<u32> forced_cause);
  void do_scheme_return();
  void machine_trap(u32 cause, u32 epc);
  void fault_in_user(u32 cause);
  u64 mem_access_cost(u32 addr) const;
  u64 next_system_event() const;
  void pause_mtime();
  void resume_mtime();
  u8 current_prio() const;
  void halt(const std::string& reason);

  SimOptions opts_;
  MachineState st_;
  MemorySystem mem_;
  PmpUnit pmp_;
  std::unique_ptr<UintrEngine> engine_;
  std::unique_ptr<KernelModel> kernel_;
  DeviceBlock devs_;
  KernelLayout klayout_;

  std::map<u32, Pending> pending_;
  WindowKind window_ = WindowKind::none;
  u64 window_remaining_ = 0;
  u32 window_irq_ = 0;
  u64 window_assert_ = 0;

  // Non-extension scheme activation state.
  bool sch_active_ = false;
  bool sch_fast_ = false;
  u32 sch_irq_ = 0;
  std::array<u32, 31> sch_saved_regs_{};
  u32 sch_saved_pc_ = 0;
  Mode sch_saved_mode_ = Mode::user;
  PmpSet sch_saved_pmp_;

  bool wait_ = false;
  bool halted_ = false;
  bool dispatched_ = false;
  std::string halt_reason_;
  std::map<u32, u32> test_vectors_;

  u64 retired_ = 0;
  u64 mtime_paused_accum_ = 0;
  u64 pause_start_ = 0;
  bool mtime_paused_ = false;
  u64 slice_end_ = 0;  // mtime value at which the current slice expires
  u64 dropped_fires_ = 0;

  std::vector<TraceEntry> trace_;
  std::vector<Activation> activations_;
  std::vector<size_t> act_stack_;  // indices of in-flight activations
};

}  // namespace usim
