// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/simulator.hpp"

#include <algorithm>

#include "core/isa.hpp"

namespace usim {

Simulator::Simulator(const SimOptions& opts)
    : opts_(opts), pmp_(opts.variant.pmp_entries) {
  opts_.variant.validate();
  build_memory();

  if (opts_.variant.present)
    engine_ = std::make_unique<UintrEngine>(opts_.variant, mem_, pmp_, st_);

  const MemLayoutCfg& ml = opts_.mem;
  klayout_.iid_table = ml.sram_base;
  klayout_.iid_entries = 32;
  klayout_.budget_area = ml.sram_base + 0x400;
  klayout_.budget_slots = 64;
  const bool pmp_in_tcm =
      engine_ && opts_.variant.table_port == TablePort::tcm_table;
  klayout_.pmp_area = pmp_in_tcm ? ml.tcm_table_base : ml.sram_base + 0x800;
  klayout_.pmp_slots = 32;
  klayout_.kernel_pmp_spill = ml.sram_base + 0x1800;
  const bool stack_in_tcm =
      engine_ && opts_.variant.stack_port == StackPort::tcm_stack;
  klayout_.hw_stack_base = stack_in_tcm ? ml.tcm_stack_base
                                        : ml.sram_base + 0x2000;

  if (opts_.with_kernel) {
    kernel_ = std::make_unique<KernelModel>(st_, mem_, pmp_, engine_.get(),
                                            klayout_);
    kernel_->boot_init(opts_.extension_enabled);
  } else if (engine_) {
    // Bare machine: program the extension directly.
    u32 ctl = kMuictlPresentBit;
    if (opts_.variant.iid == IidMode::table) ctl |= klayout_.iid_table;
    if (opts_.extension_enabled) ctl |= kMuictlEnableBit;
    st_.csrs.muictl = ctl;
    engine_->write_muistk(klayout_.hw_stack_base);
    engine_->set_kernel_pmp_spill_addr(klayout_.kernel_pmp_spill);
  }

  mem_.set_audit(opts_.audit_commits);
  devs_.sensor.set_wait(opts_.sensor_wait);
  slice_end_ = opts_.core.quantum;
}

void Simulator::build_memory() {
  const MemLayoutCfg& ml = opts_.mem;
  mem_.add_region({ml.flash_base, ml.flash_size, RegionKind::flash,
                   ml.flash_beat, nullptr, {}});
  mem_.add_region({ml.sram_base, ml.sram_size, RegionKind::sram, ml.sram_beat,
                   nullptr, {}});
  const bool need_tcm_stack =
      opts_.variant.present && opts_.variant.stack_port == StackPort::tcm_stack;
  const bool need_tcm_table =
      opts_.variant.present && opts_.variant.table_port == TablePort::tcm_table;
  if (need_tcm_stack)
    mem_.add_region({ml.tcm_stack_base, ml.tcm_stack_size,
                     RegionKind::tcm_stack, ml.tcm_beat, nullptr, {}});
  if (need_tcm_table)
    mem_.add_region({ml.tcm_table_base, ml.tcm_table_size,
                     RegionKind::tcm_table, ml.tcm_beat, nullptr, {}});
  if (opts_.with_devices)
    mem_.add_region(
        {kMmioBase, kMmioSize, RegionKind::mmio, opts_.mem.mmio_beat, &devs_, {}});
}

u64 Simulator::mtime() const {
  u64 t = st_.cycle - mtime_paused_accum_;
  if (mtime_paused_) t -= st_.cycle - pause_start_;
  return t;
}

void Simulator::pause_mtime() {
  if (mtime_paused_) return;
  mtime_paused_ = true;
  pause_start_ = st_.cycle;
}

void Simulator::resume_mtime() {
  if (!mtime_paused_) return;
  mtime_paused_ = false;
  mtime_paused_accum_ += st_.cycle - pause_start_;
}

bool Simulator::in_handler() const {
  return (engine_ && engine_->handler_active()) || sch_active_;
}

u8 Simulator::current_prio() const {
  return engine_ ? engine_->active_prio() : 0;
}

void Simulator::halt(const std::string& reason) {
  halted_ = true;
  halt_reason_ = reason;
}

void Simulator::raise_irq(u32 irq) {
  auto it = pending_.find(irq);
  if (it != pending_.end()) {
    ++dropped_fires_;
    return;
  }
  pending_[irq] = Pending{st_.cycle};
}

void Simulator::pump_devices() {
  if (!opts_.with_devices) return;
  while (true) {
    auto f = devs_.next_fire();
    if (f.cycle == kNoEvent || f.cycle > st_.cycle) break;
    devs_.consume(f.irq);
    auto it = pending_.find(f.irq);
    if (it != pending_.end()) {
      ++dropped_fires_;
    } else {
      pending_[f.irq] = Pending{f.cycle};
    }
  }
}

u64 Simulator::next_system_event() const {
  u64 ev = kNoEvent;
  if (opts_.with_devices) ev = std::min(ev, devs_.next_fire().cycle);
  if (kernel_) ev = std::min(ev, kernel_->next_replenish());
  return ev;
}

bool Simulator::try_deliver() {
  if (pending_.empty()) return false;

  // Extension path: direct delivery into the handler domain, regardless of
  // what the core is doing, gated only by the global enable and priority.
  if (engine_ && st_.csrs.uintr_enabled()) {
    int best_irq = -1;
    u8 best_prio = 0;
    const u8 cur = current_prio();
    for (auto& [irq, p] : pending_) {
      auto probe = engine_->iid_probe(irq);
      if (!probe.hit) continue;
      const u8 prio = engine_->priority(irq);
      if (prio <= cur) continue;
      if (best_irq < 0 || prio > best_prio ||
          (prio == best_prio && irq < static_cast<u32>(best_irq))) {
        best_irq = static_cast<int>(irq);
        best_prio = prio;
      }
    }
    if (best_irq >= 0) {
      const u64 assert_cycle = pending_[best_irq].assert_cycle;
      pending_.erase(static_cast<u32>(best_irq));
      deliver_ext(static_cast<u32>(best_irq), assert_cycle);
      return true;
    }
  }

  // Kernel-level path: machine mediation, only from plain thread context.
  if (in_handler() || window_ != WindowKind::none) return false;

  if (kernel_) {
    for (auto it = pending_.begin(); it != pending_.end(); ++it) {
      const u32 irq = it->first;
      const u64 assert_cycle = it->second.assert_cycle;
      if (kernel_->vector(irq)) {
        pending_.erase(it);
        deliver_scheme(irq, assert_cycle);
        return true;
      }
      // Disabled or unregistered lines stay pending until software
      // enables a consumer.
    }
    return false;
  }

  // Bare machine: standard trap delivery when globally enabled.
  if (st_.csrs.mtvec != 0 && (st_.csrs.mstatus & (1u << 3)) &&
      st_.mode == Mode::machine) {
    const u32 irq = pending_.begin()->first;
    pending_.erase(pending_.begin());
    deliver_machine_irq(irq);
    return true;
  }
  return false;
}

void Simulator::deliver_ext(u32 irq, u64 assert_cycle) {
  CtxKind preempted;
  Mode pmode;
  if (engine_->handler_active()) {
    preempted = CtxKind::handler;
    pmode = Mode::user;
  } else if (window_ != WindowKind::none || st_.mode == Mode::machine) {
    preempted = CtxKind::kernel;
    pmode = Mode::machine;
  } else {
    preempted = CtxKind::thread;
    pmode = Mode::user;
  }
  if (preempted != CtxKind::handler) pause_mtime();

  EntrySchedule sched =
      engine_->enter(irq, preempted, st_.pc, pmode, st_.cycle);
  st_.cycle += sched.total + opts_.variant.cal.pipeline_fill_cycles;

  std::optional<u32> vec;
  if (kernel_) vec = kernel_->vector(irq);
  if (!vec) {
    auto it = test_vectors_.find(irq);
    if (it != test_vectors_.end()) vec = it->second;
  }
  if (!vec) {
    halt("extension delivery without a handler vector");
    return;
  }
  st_.pc = *vec;
  wait_ = false;

  if (opts_.log_activations) {
    activations_.push_back(
        {irq, assert_cycle, st_.cycle, 0, 0, false, mtime(), 0});
    act_stack_.push_back(activations_.size() - 1);
  }
}

void Simulator::deliver_scheme(u32 irq, u64 assert_cycle) {
  const SchemeConfig& sc = opts_.scheme;
  u64 dur;
  sch_fast_ = false;
  switch (sc.kind) {
    case SchemeKind::intel: {
      const Registration* r = kernel_->registration_for(irq);
      const bool active = r && kernel_->running_process() == r->proc;
      sch_fast_ = active;
      dur = active ? sc.intel_fast : sc.kernel_path + sc.kernel_entry_extra;
      break;
    }
    case SchemeKind::software:
      dur = sc.software_path;
      break;
    case SchemeKind::kernel:
    case SchemeKind::ext:  // registered source with the extension disabled
    default:
      dur = sc.kernel_path + sc.kernel_entry_extra;
      break;
  }
  window_irq_ = irq;
  window_assert_ = assert_cycle;
  wait_ = false;
  start_window(WindowKind::scheme_entry, dur);
}

void Simulator::deliver_machine_irq(u32 irq) {
  u32& ms = st_.csrs.mstatus;
  const u32 mie = (ms >> 3) & 1;
  ms = (ms & ~(1u << 7)) | (mie << 7);  // MPIE <- MIE
  ms &= ~(1u << 3);                     // MIE <- 0
  ms = (ms & ~(3u << 11)) | (3u << 11); // MPP <- machine
  st_.csrs.mepc = st_.pc;
  st_.csrs.mcause = 0x80000000u | irq;
  st_.pc = st_.csrs.mtvec;
  st_.cycle += opts_.core.trap_entry + opts_.variant.cal.pipeline_fill_cycles;
  wait_ = false;
}

void Simulator::start_window(WindowKind kind, u64 duration) {
  window_ = kind;
  window_remaining_ = duration;
  if (duration == 0) finish_window();
}

void Simulator::advance_window() {
  const u64 ev = next_system_event();
  u64 delta = window_remaining_;
  if (ev != kNoEvent && ev > st_.cycle)
    delta = std::min(delta, ev - st_.cycle);
  st_.cycle += delta;
  window_remaining_ -= delta;
  if (window_remaining_ == 0) finish_window();
}

void Simulator::finish_window() {
  const WindowKind kind = window_;
  window_ = WindowKind::none;
  switch (kind) {
    case WindowKind::syscall:
      kernel_->handle_ecall();
      st_.mode = Mode::user;
      break;
    case WindowKind::sched_switch:
      kernel_->switch_to_next();
      slice_end_ = mtime() + opts_.core.quantum;
      break;
    case WindowKind::scheme_entry: {
      const Registration* r = kernel_->registration_for(window_irq_);
      if (!r) {
        halt("scheme delivery for unregistered interrupt");
        return;
      }
      sch_saved_regs_ = st_.bank().x;
      sch_saved_pc_ = st_.pc;
      sch_saved_mode_ = st_.mode;
      sch_saved_pmp_ = pmp_.active();
      std::vector<u32> words(pmp_record_words(pmp_.k()));
      for (size_t i = 0; i < words.size(); ++i)
        words[i] = mem_.peek32(r->pmp_ptr + 4 * static_cast<u32>(i));
      pmp_.install(unpack_pmp_record(words, pmp_.k()));
      st_.bank().x.fill(0);
      st_.pc = r->entry_pc;
      st_.mode = Mode::user;
      sch_active_ = true;
      sch_irq_ = window_irq_;
      pause_mtime();
      if (opts_.log_activations) {
        activations_.push_back(
            {window_irq_, window_assert_, st_.cycle, 0, 0, false, mtime(), 0});
        act_stack_.push_back(activations_.size() - 1);
      }
      break;
    }
    case WindowKind::scheme_return:
      st_.bank().x = sch_saved_regs_;
      st_.pc = sch_saved_pc_;
      st_.mode = sch_saved_mode_;
      pmp_.install(sch_saved_pmp_);
      resume_mtime();
      if (opts_.log_activations && !act_stack_.empty()) {
        Activation& a = activations_[act_stack_.back()];
        act_stack_.pop_back();
        a.return_done = st_.cycle;
        a.returned = true;
        a.mtime_return = mtime();
      }
      break;
    case WindowKind::none:
      break;
  }
}

void Simulator::do_scheme_return() {
  const SchemeConfig& sc = opts_.scheme;
  u64 dur;
  switch (sc.kind) {
    case SchemeKind::intel:
      dur = sch_fast_ ? sc.intel_fast_return : sc.kernel_return;
      break;
    case SchemeKind::software:
      dur = sc.software_return;
      break;
    default:
      dur = sc.kernel_return;
      break;
  }
  // The handler body is over; the kernel restore path runs as a window.
  sch_active_ = false;
  st_.mode = Mode::machine;
  start_window(WindowKind::scheme_return, dur);
}

void Simulator::do_uintr_return(std::optional<u32> forced_cause) {
  UintrEngine::ReturnResult res =
      forced_cause ? engine_->force_return(*forced_cause, st_.cycle)
                   : engine_->ret(st_.cycle);
  st_.cycle += res.schedule.total + opts_.variant.cal.pipeline_fill_cycles;
  st_.pc = res.resume_pc;
  st_.mode = res.resume_mode;
  if (res.resumed_kind != CtxKind::handler) resume_mtime();
  if (opts_.log_activations && !act_stack_.empty()) {
    Activation& a = activations_[act_stack_.back()];
    act_stack_.pop_back();
    a.return_done = st_.cycle;
    a.forced_cause = forced_cause.value_or(0);
    a.returned = true;
    a.mtime_return = mtime();
  }
}

void Simulator::machine_trap(u32 cause, u32 epc) {
  if (st_.csrs.mtvec == 0) {
    halt("unhandled machine trap, cause " + std::to_string(cause));
    return;
  }
  u32& ms = st_.csrs.mstatus;
  const u32 mie = (ms >> 3) & 1;
  ms = (ms & ~(1u << 7)) | (mie << 7);
  ms &= ~(1u << 3);
  const u32 mpp = st_.mode == Mode::machine ? 3u : 0u;
  ms = (ms & ~(3u << 11)) | (mpp << 11);
  st_.csrs.mepc = epc;
  st_.csrs.mcause = cause;
  st_.mode = Mode::machine;
  st_.pc = st_.csrs.mtvec;
  st_.cycle += opts_.core.trap_entry + opts_.variant.cal.pipeline_fill_cycles;
}

void Simulator::fault_in_user(u32 cause) {
  // Faults inside a user-level handler force a return; elsewhere they trap.
  if (engine_ && engine_->handler_active()) {
    const u32 muic = (cause == kExcLoadAccess || cause == kExcStoreAccess ||
                      cause == kExcInstrAccess)
                         ? kCauseSpatial
                         : kCauseExceptionBase + cause;
    do_uintr_return(muic);
    return;
  }
  if (sch_active_) {
    // Baseline schemes kill the activation through the kernel return path.
    do_scheme_return();
    return;
  }
  if (st_.mode == Mode::machine || !kernel_) {
    machine_trap(cause, st_.pc);
    return;
  }
  halt("user thread faulted, cause " + std::to_string(cause));
}

u64 Simulator::mem_access_cost(u32 addr) const {
  const Region* r = mem_.find(addr);
  if (!r) return 0;
  const u64 free_at = mem_.port_free_at(r->port());
  const u64 stall = free_at > st_.cycle ? free_at - st_.cycle : 0;
  return stall + mem_.transfer_duration(Requester::core_data, addr, 1);
}

std::optional<u32> Simulator::csr_access(u16 csr, CsrOp op, u32 value) {
  if (st_.mode != Mode::machine) return std::nullopt;
  CsrFile& c = st_.csrs;

  auto rmw = [&](u32 old) {
    switch (op) {
      case CsrOp::read: return old;
      case CsrOp::write: return value;
      case CsrOp::set: return old | value;
      case CsrOp::clear: return old & ~value;
    }
    return old;
  };

  // CAM register window.
  if (csr >= kCsrIidBase && csr < kCsrIidBase + 3 * kCamCsrEntries) {
    if (!engine_ || opts_.variant.iid != IidMode::cam) return std::nullopt;
    const unsigned idx = (csr - kCsrIidBase) / 3;
    const unsigned field = (csr - kCsrIidBase) % 3;
    if (idx >= std::min<unsigned>(kCamCsrEntries, engine_->cam_capacity()))
      return std::nullopt;
    const u32 old = engine_->cam_read(idx, field);
    if (op != CsrOp::read) engine_->cam_write(idx, field, rmw(old));
    return old;
  }

  switch (csr) {
    case kCsrMstatus: {
      const u32 old = c.mstatus;
      if (op != CsrOp::read) c.mstatus = rmw(old);
      return old;
    }
    case kCsrMtvec: {
      const u32 old = c.mtvec;
      if (op != CsrOp::read) c.mtvec = rmw(old);
      return old;
    }
    case kCsrMscratch: {
      const u32 old = c.mscratch;
      if (op != CsrOp::read) c.mscratch = rmw(old);
      return old;
    }
    case kCsrMepc: {
      const u32 old = c.mepc;
      if (op != CsrOp::read) c.mepc = rmw(old) & ~0x3u;
      return old;
    }
    case kCsrMcause: {
      const u32 old = c.mcause;
      if (op != CsrOp::read) c.mcause = rmw(old);
      return old;
    }
    case kCsrMuictl: {
      if (!engine_) return std::nullopt;
      const u32 old = c.muictl;
      if (op != CsrOp::read) {
        // bit1 (hardware support) is immutable by software.
        const u32 nv = rmw(old);
        c.muictl = (nv & ~kMuictlPresentBit) | (old & kMuictlPresentBit);
      }
      return old;
    }
    case kCsrMuistk: {
      if (!engine_) return std::nullopt;
      const u32 old = c.muistk;
      if (op != CsrOp::read) engine_->write_muistk(rmw(old));
      return old;
    }
    case kCsrMuiepc: {
      if (!engine_) return std::nullopt;
      const u32 old = c.muiepc;
      if (op != CsrOp::read) c.muiepc = rmw(old);
      return old;
    }
    case kCsrMuicause: {
      if (!engine_) return std::nullopt;
      const u32 old = c.muicause;
      if (op != CsrOp::read) c.muicause = rmw(old);
      return old;
    }
    case kCsrMtime: return static_cast<u32>(mtime());
    case kCsrMtimeh: return static_cast<u32>(mtime() >> 32);
    case kCsrMtimecmp: {
      const u32 old = static_cast<u32>(c.mtimecmp);
      if (op != CsrOp::read)
        c.mtimecmp = (c.mtimecmp & 0xffffffff00000000ull) | rmw(old);
      return old;
    }
    case kCsrMtimecmph: {
      const u32 old = static_cast<u32>(c.mtimecmp >> 32);
      if (op != CsrOp::read)
        c.mtimecmp =
            (c.mtimecmp & 0xffffffffull) | (static_cast<u64>(rmw(old)) << 32);
      return old;
    }
    default:
      return std::nullopt;
  }
}

bool Simulator::step() {
  if (halted_) return false;
  pump_devices();
  if (kernel_ && kernel_->next_replenish() <= st_.cycle)
    kernel_->replenish_tick(st_.cycle);

  if (kernel_ && !dispatched_) {
    dispatched_ = true;
    if (kernel_->dispatch_first()) slice_end_ = mtime() + opts_.core.quantum;
  }

  if (try_deliver()) return !halted_;

  if (in_handler()) {
    exec_one();
    return !halted_;
  }

  if (window_ != WindowKind::none) {
    advance_window();
    return !halted_;
  }

  if (kernel_ && kernel_->ready_count() > 1 && mtime() >= slice_end_) {
    st_.mode = Mode::machine;
    start_window(WindowKind::sched_switch, opts_.core.switch_window);
    return !halted_;
  }

  if (wait_ || (kernel_ && !kernel_->has_running())) {
    const u64 ev = next_system_event();
    if (ev == kNoEvent) {
      halt("idle with no future events");
      return false;
    }
    st_.cycle = std::max(st_.cycle, ev);
    return true;
  }

  exec_one();
  return !halted_;
}

void Simulator::run(u64 cycle_limit) {
  while (!halted_ && st_.cycle < cycle_limit) step();
}

void Simulator::exec_one() {
  // Budget exhaustion is detected at the instruction boundary.
  if (engine_ && engine_->handler_active() &&
      engine_->active_remaining() == 0) {
    do_uintr_return(kCauseTemporal);
    return;
  }

  const u32 pc = st_.pc;
  const Region* cr = mem_.find(pc);
  if (!cr || (pc & 3)) {
    fault_in_user(kExcInstrAccess);
    return;
  }
  if (st_.mode == Mode::user && !pmp_.check(pc, 4, Access::exec, st_.mode)) {
    fault_in_user(kExcInstrAccess);
    return;
  }

  const u32 raw = mem_.peek32(pc);
  const Instruction in = decode(raw);

  if (opts_.trace_retired) trace_.push_back({st_.cycle, pc, raw});

  if (in.illegal()) {
    fault_in_user(kExcIllegal);
    return;
  }

  const CoreTiming& ct = opts_.core;
  u64 cost = 1;
  u32 next_pc = pc + 4;

  // Memory operands are validated before anything commits so a denied or
  // malformed access can be suppressed entirely (the forced-return path
  // must leave target memory untouched).
  u32 ea = 0;
  bool is_mem = is_load(in.op) || is_store(in.op);
  if (is_mem) {
    ea = st_.reg(in.rs1) + static_cast<u32>(in.imm);
    const unsigned w = mem_width(in.op);
    if (ea % w != 0) {
      fault_in_user(is_store(in.op) ? kExcStoreMisaligned : kExcLoadMisaligned);
      return;
    }
    const Region* r = mem_.find(ea);
    if (!r || !r->contains(ea, w)) {
      fault_in_user(is_store(in.op) ? kExcStoreAccess : kExcLoadAccess);
      return;
    }
    const Access acc = is_store(in.op) ? Access::write : Access::read;
    if (!pmp_.check(ea, w, acc, st_.mode)) {
      fault_in_user(is_store(in.op) ? kExcStoreAccess : kExcLoadAccess);
      return;
    }
    cost += mem_access_cost(ea);
  }

  switch (in.op) {
    case Op::kMul: case Op::kMulh: case Op::kMulhsu: case Op::kMulhu:
      cost = ct.mul_cycles;
      break;
    case Op::kDiv: case Op::kDivu: case Op::kRem: case Op::kRemu:
      cost = ct.div_cycles;
      break;
    case Op::kJal: case Op::kJalr: case Op::kMret:
      cost = 1 + ct.branch_penalty;
      break;
    default:
      break;
  }
  if (is_branch(in.op)) {
    const u32 rs1 = st_.reg(in.rs1), rs2 = st_.reg(in.rs2);
    bool taken = false;
    switch (in.op) {
      case Op::kBeq: taken = rs1 == rs2; break;
      case Op::kBne: taken = rs1 != rs2; break;
      case Op::kBlt: taken = static_cast<i32>(rs1) < static_cast<i32>(rs2); break;
      case Op::kBge: taken = static_cast<i32>(rs1) >= static_cast<i32>(rs2); break;
      case Op::kBltu: taken = rs1 < rs2; break;
      case Op::kBgeu: taken = rs1 >= rs2; break;
      default: break;
    }
    const bool predicted_taken = in.imm < 0;  // backward taken, forward not
    if (taken != predicted_taken) cost += ct.branch_penalty;
    if (taken) next_pc = pc + static_cast<u32>(in.imm);
  }

  // Temporal confinement: an instruction that would outrun the remaining
  // budget is squashed at the exhaustion cycle without committing.
  if (engine_ && engine_->handler_active()) {
    const u64 allowed = engine_->consume_budget(cost);
    if (allowed < cost) {
      st_.cycle += allowed;
      do_uintr_return(kCauseTemporal);
      return;
    }
  }

  switch (in.op) {
    case Op::kLui: st_.set_reg(in.rd, static_cast<u32>(in.imm)); break;
    case Op::kAuipc: st_.set_reg(in.rd, pc + static_cast<u32>(in.imm)); break;
    case Op::kJal:
      st_.set_reg(in.rd, pc + 4);
      next_pc = pc + static_cast<u32>(in.imm);
      break;
    case Op::kJalr: {
      const u32 target = (st_.reg(in.rs1) + static_cast<u32>(in.imm)) & ~1u;
      st_.set_reg(in.rd, pc + 4);
      next_pc = target;
      break;
    }
    case Op::kBeq: case Op::kBne: case Op::kBlt:
    case Op::kBge: case Op::kBltu: case Op::kBgeu:
      break;  // handled above
    case Op::kLb: case Op::kLh: case Op::kLw: case Op::kLbu: case Op::kLhu: {
      auto res = mem_.data_access(ea, mem_width(in.op), false, 0, st_.cycle,
                                  st_.mode);
      u32 v = res->value;
      if (in.op == Op::kLb) v = sign_extend(v & 0xff, 8);
      if (in.op == Op::kLh) v = sign_extend(v & 0xffff, 16);
      st_.set_reg(in.rd, v);
      break;
    }
    case Op::kSb: case Op::kSh: case Op::kSw:
      mem_.data_access(ea, mem_width(in.op), true, st_.reg(in.rs2), st_.cycle,
                       st_.mode);
      break;
    case Op::kAddi: st_.set_reg(in.rd, st_.reg(in.rs1) + static_cast<u32>(in.imm)); break;
    case Op::kSlti:
      st_.set_reg(in.rd, static_cast<i32>(st_.reg(in.rs1)) < in.imm ? 1 : 0);
      break;
    case Op::kSltiu:
      st_.set_reg(in.rd, st_.reg(in.rs1) < static_cast<u32>(in.imm) ? 1 : 0);
      break;
    case Op::kXori: st_.set_reg(in.rd, st_.reg(in.rs1) ^ static_cast<u32>(in.imm)); break;
    case Op::kOri: st_.set_reg(in.rd, st_.reg(in.rs1) | static_cast<u32>(in.imm)); break;
    case Op::kAndi: st_.set_reg(in.rd, st_.reg(in.rs1) & static_cast<u32>(in.imm)); break;
    case Op::kSlli: st_.set_reg(in.rd, st_.reg(in.rs1) << (in.imm & 31)); break;
    case Op::kSrli: st_.set_reg(in.rd, st_.reg(in.rs1) >> (in.imm & 31)); break;
    case Op::kSrai:
      st_.set_reg(in.rd,
                  static_cast<u32>(static_cast<i32>(st_.reg(in.rs1)) >> (in.imm & 31)));
      break;
    case Op::kAdd: st_.set_reg(in.rd, st_.reg(in.rs1) + st_.reg(in.rs2)); break;
    case Op::kSub: st_.set_reg(in.rd, st_.reg(in.rs1) - st_.reg(in.rs2)); break;
    case Op::kSll: st_.set_reg(in.rd, st_.reg(in.rs1) << (st_.reg(in.rs2) & 31)); break;
    case Op::kSlt:
      st_.set_reg(in.rd, static_cast<i32>(st_.reg(in.rs1)) <
                                 static_cast<i32>(st_.reg(in.rs2))
                             ? 1
                             : 0);
      break;
    case Op::kSltu: st_.set_reg(in.rd, st_.reg(in.rs1) < st_.reg(in.rs2) ? 1 : 0); break;
    case Op::kXor: st_.set_reg(in.rd, st_.reg(in.rs1) ^ st_.reg(in.rs2)); break;
    case Op::kSrl: st_.set_reg(in.rd, st_.reg(in.rs1) >> (st_.reg(in.rs2) & 31)); break;
    case Op::kSra:
      st_.set_reg(in.rd, static_cast<u32>(static_cast<i32>(st_.reg(in.rs1)) >>
                                          (st_.reg(in.rs2) & 31)));
      break;
    case Op::kOr: st_.set_reg(in.rd, st_.reg(in.rs1) | st_.reg(in.rs2)); break;
    case Op::kAnd: st_.set_reg(in.rd, st_.reg(in.rs1) & st_.reg(in.rs2)); break;
    case Op::kMul:
      st_.set_reg(in.rd, st_.reg(in.rs1) * st_.reg(in.rs2));
      break;
    case Op::kMulh: {
      const i64 p = static_cast<i64>(static_cast<i32>(st_.reg(in.rs1))) *
                    static_cast<i64>(static_cast<i32>(st_.reg(in.rs2)));
      st_.set_reg(in.rd, static_cast<u32>(static_cast<u64>(p) >> 32));
      break;
    }
    case Op::kMulhsu: {
      const i64 p = static_cast<i64>(static_cast<i32>(st_.reg(in.rs1))) *
                    static_cast<i64>(static_cast<u64>(st_.reg(in.rs2)));
      st_.set_reg(in.rd, static_cast<u32>(static_cast<u64>(p) >> 32));
      break;
    }
    case Op::kMulhu: {
      const u64 p = static_cast<u64>(st_.reg(in.rs1)) *
                    static_cast<u64>(st_.reg(in.rs2));
      st_.set_reg(in.rd, static_cast<u32>(p >> 32));
      break;
    }
    case Op::kDiv: {
      const i32 a = static_cast<i32>(st_.reg(in.rs1));
      const i32 b = static_cast<i32>(st_.reg(in.rs2));
      i32 q;
      if (b == 0) q = -1;
      else if (a == INT32_MIN && b == -1) q = a;
      else q = a / b;
      st_.set_reg(in.rd, static_cast<u32>(q));
      break;
    }
    case Op::kDivu: {
      const u32 a = st_.reg(in.rs1), b = st_.reg(in.rs2);
      st_.set_reg(in.rd, b == 0 ? 0xffffffffu : a / b);
      break;
    }
    case Op::kRem: {
      const i32 a = static_cast<i32>(st_.reg(in.rs1));
      const i32 b = static_cast<i32>(st_.reg(in.rs2));
      i32 r;
      if (b == 0) r = a;
      else if (a == INT32_MIN && b == -1) r = 0;
      else r = a % b;
      st_.set_reg(in.rd, static_cast<u32>(r));
      break;
    }
    case Op::kRemu: {
      const u32 a = st_.reg(in.rs1), b = st_.reg(in.rs2);
      st_.set_reg(in.rd, b == 0 ? a : a % b);
      break;
    }
    case Op::kFence:
      break;
    case Op::kEcall:
      ++retired_;
      if (engine_ && engine_->handler_active()) {
        st_.cycle += cost;
        do_uintr_return(kCauseExceptionBase + kExcEcallU);
        return;
      }
      if (kernel_ && st_.mode == Mode::user && !sch_active_) {
        st_.pc = pc + 4;
        st_.mode = Mode::machine;
        st_.cycle += cost;
        start_window(WindowKind::syscall, ct.syscall_window);
        return;
      }
      machine_trap(st_.mode == Mode::machine ? kExcEcallM : kExcEcallU, pc);
      return;
    case Op::kEbreak:
      ++retired_;
      if (engine_ && engine_->handler_active()) {
        st_.cycle += cost;
        do_uintr_return(kCauseExceptionBase + kExcBreakpoint);
        return;
      }
      st_.cycle += cost;
      halt("ebreak");
      return;
    case Op::kMret: {
      if (st_.mode != Mode::machine) {
        fault_in_user(kExcIllegal);
        return;
      }
      u32& ms = st_.csrs.mstatus;
      const u32 mpie = (ms >> 7) & 1;
      ms = (ms & ~(1u << 3)) | (mpie << 3);
      const u32 mpp = (ms >> 11) & 3;
      st_.mode = mpp == 3 ? Mode::machine : Mode::user;
      next_pc = st_.csrs.mepc;
      break;
    }
    case Op::kUret:
      ++retired_;
      st_.cycle += cost;
      if (engine_ && engine_->handler_active()) {
        do_uintr_return(std::nullopt);
        return;
      }
      if (sch_active_) {
        do_scheme_return();
        return;
      }
      fault_in_user(kExcIllegal);
      return;
    case Op::kWfi:
      ++retired_;
      if (st_.mode != Mode::machine) {
        fault_in_user(kExcIllegal);
        return;
      }
      st_.cycle += cost;
      st_.pc = pc + 4;
      wait_ = true;
      return;
    case Op::kCsrrw: case Op::kCsrrs: case Op::kCsrrc:
    case Op::kCsrrwi: case Op::kCsrrsi: case Op::kCsrrci: {
      const bool imm_form = in.op == Op::kCsrrwi || in.op == Op::kCsrrsi ||
                            in.op == Op::kCsrrci;
      const u32 operand = imm_form ? static_cast<u32>(in.imm) : st_.reg(in.rs1);
      CsrOp cop;
      if (in.op == Op::kCsrrw || in.op == Op::kCsrrwi) cop = CsrOp::write;
      else if (in.op == Op::kCsrrs || in.op == Op::kCsrrsi)
        cop = (in.rs1 == 0 && !imm_form) || (imm_form && in.imm == 0)
                  ? CsrOp::read
                  : CsrOp::set;
      else
        cop = (in.rs1 == 0 && !imm_form) || (imm_form && in.imm == 0)
                  ? CsrOp::read
                  : CsrOp::clear;
      auto old = csr_access(in.csr, cop, operand);
      if (!old) {
        fault_in_user(kExcIllegal);
        return;
      }
      st_.set_reg(in.rd, *old);
      break;
    }
    case Op::kIllegal:
      break;
  }

  ++retired_;
  st_.cycle += cost;
  st_.pc = next_pc;
}

}  // namespace usim
