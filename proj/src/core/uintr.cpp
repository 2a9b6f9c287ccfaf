// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/uintr.hpp"

#include <algorithm>

namespace usim {

const char* seg_action_name(SegAction a) {
  switch (a) {
    case SegAction::ack: return "ack";
    case SegAction::iid_lookup: return "iid_lookup";
    case SegAction::pmp_load: return "pmp_load";
    case SegAction::budget_load: return "budget_load";
    case SegAction::ctx_save: return "ctx_save";
    case SegAction::redirect: return "redirect";
    case SegAction::budget_writeback: return "budget_wb";
    case SegAction::pmp_spill: return "pmp_spill";
    case SegAction::pmp_restore: return "pmp_restore";
    case SegAction::budget_reload: return "budget_reload";
    case SegAction::ctx_restore: return "ctx_restore";
  }
  return "?";
}

UintrEngine::UintrEngine(const VariantConfig& vc, MemorySystem& mem,
                         PmpUnit& pmp, MachineState& st)
    : vc_(vc), mem_(mem), pmp_(pmp), st_(st) {
  vc_.validate();
  cam_.resize(vc_.cam_entries);
  // Bank 0 carries the boot/thread context and starts busy.
  st_.banks.assign(1 + vc_.extra_banks, RegBank{});
  st_.active_bank = 0;
  bank_busy_.assign(1 + vc_.extra_banks, false);
  bank_busy_[0] = true;

  if (vc_.stack_port == StackPort::tcm_stack &&
      !mem_.has_port(PortId::tcm_stack))
    throw ConfigError("variant uses tcm_stack but no such region is mapped");
  if (vc_.table_port == TablePort::tcm_table &&
      !mem_.has_port(PortId::tcm_table))
    throw ConfigError("variant uses tcm_table but no such region is mapped");
}

u32 UintrEngine::iid_record_addr(u32 int_num) const {
  return st_.csrs.iid_base() + int_num * kIidRecordWords * 4;
}

UintrEngine::Lookup UintrEngine::iid_probe(u32 int_num) const {
  Lookup r;
  if (vc_.iid == IidMode::cam) {
    // First matching entry wins.
    for (const auto& slot : cam_) {
      if (slot.valid && slot.enabled && slot.int_num == int_num) {
        r.hit = true;
        r.pmp_ptr = slot.pmp_ptr;
        r.budget_ptr = slot.budget_ptr;
        return r;
      }
    }
    return r;
  }
  const u32 addr = iid_record_addr(int_num);
  if (!mem_.find(addr)) return r;
  if (mem_.peek32(addr) == 0) return r;  // not enabled
  r.hit = true;
  r.pmp_ptr = mem_.peek32(addr + 8);
  r.budget_ptr = mem_.peek32(addr + 12);
  return r;
}

UintrEngine::Lookup UintrEngine::iid_lookup(u32 int_num, u64 now) {
  if (vc_.iid == IidMode::cam) return iid_probe(int_num);
  Lookup r = iid_probe(int_num);
  PortRequest req;
  req.who = Requester::table_loader;
  req.addr = iid_record_addr(int_num);
  req.words = kIidRecordWords;
  req.issue_cycle = now;
  PortGrant g = mem_.transfer(req);
  r.cycles = g.complete - now;
  return r;
}

void UintrEngine::cam_write(unsigned idx, unsigned field, u32 value) {
  if (idx >= cam_.size()) throw SimFatal("CAM index out of range");
  CamSlot& s = cam_[idx];
  switch (field) {
    case 0:
      s.int_num = value;
      s.valid = value != kCamEmpty;
      s.enabled = s.valid && s.enabled;
      break;
    case 1: s.pmp_ptr = value; break;
    default: s.budget_ptr = value; break;
  }
}

u32 UintrEngine::cam_read(unsigned idx, unsigned field) const {
  if (idx >= cam_.size()) throw SimFatal("CAM index out of range");
  const CamSlot& s = cam_[idx];
  switch (field) {
    case 0: return s.int_num;
    case 1: return s.pmp_ptr;
    default: return s.budget_ptr;
  }
}

int UintrEngine::cam_alloc(u32 int_num, u32 pmp_ptr, u32 budget_ptr) {
  for (unsigned i = 0; i < cam_.size(); ++i) {
    if (!cam_[i].valid) {
      cam_[i] = {true, false, int_num, pmp_ptr, budget_ptr};
      return static_cast<int>(i);
    }
  }
  return -1;
}

void UintrEngine::cam_free(unsigned idx) {
  if (idx >= cam_.size()) throw SimFatal("CAM index out of range");
  cam_[idx] = CamSlot{};
}

void UintrEngine::set_source_enabled(u32 int_num, bool on) {
  if (vc_.iid == IidMode::cam) {
    for (auto& s : cam_) {
      if (s.valid && s.int_num == int_num) {
        s.enabled = on;
        return;
      }
    }
    return;
  }
  const u32 addr = iid_record_addr(int_num);
  if (mem_.find(addr)) mem_.poke32(addr, on ? 1 : 0);
}

bool UintrEngine::source_enabled(u32 int_num) const {
  return iid_probe(int_num).hit;
}

void UintrEngine::set_priority(u32 int_num, u8 prio) { prio_[int_num] = prio; }

u8 UintrEngine::priority(u32 int_num) const {
  auto it = prio_.find(int_num);
  return it == prio_.end() ? 1 : it->second;
}

u32 UintrEngine::pack_status(CtxKind kind, Mode mode, u32 int_num) const {
  u32 s = static_cast<u32>(kind) & 0x3;
  if (mode == Mode::machine) s |= 1u << 2;
  s |= (int_num & 0xffff) << 16;
  return s;
}

void UintrEngine::unpack_status(u32 status, CtxKind& kind, Mode& mode,
                                u32& int_num) const {
  kind = static_cast<CtxKind>(status & 0x3);
  mode = (status & (1u << 2)) ? Mode::machine : Mode::user;
  int_num = status >> 16;
}

void UintrEngine::write_muistk(u32 base) {
  st_.csrs.muistk = base;
  stack_base_ = base;
  stack_top_ = base;
}

void UintrEngine::check_stack_room() const {
  const Region* r = mem_.find(stack_base_);
  if (!r) throw SimFatal("muistk points to unmapped memory");
  if (stack_top_ + kFrameWords * 4 > r->base + r->size)
    throw SimFatal("hardware save stack overflow (nesting too deep)");
}

unsigned UintrEngine::free_banks() const {
  unsigned n = 0;
  for (bool b : bank_busy_)
    if (!b) ++n;
  return n;
}

bool UintrEngine::budget_running(u32 budget_ptr) const {
  for (const auto& l : nest_)
    if (l.budget_ptr == budget_ptr) return true;
  return false;
}

EntrySchedule UintrEngine::enter(u32 int_num, CtxKind preempted,
                                 u32 preempted_pc, Mode preempted_mode,
                                 u64 now) {
  EntrySchedule sched;
  const Calibration& cal = vc_.cal;
  u64 t = now;

  sched.segments.push_back({SegAction::ack, t, t + cal.ack_cycles, -1});
  t += cal.ack_cycles;

  Lookup lk;
  if (vc_.iid == IidMode::table) {
    lk = iid_lookup(int_num, t);
    const u64 seg_end = t + lk.cycles + cal.iid_dispatch_cycles;
    sched.segments.push_back(
        {SegAction::iid_lookup, t, seg_end, int(PortId::main)});
    t = seg_end;
  } else {
    lk = iid_probe(int_num);
  }
  if (!lk.hit) throw SimFatal("enter_uintr on an unregistered interrupt");

  const u64 t_par = t;
  u64 finish = t_par;

  // Preempting another handler: its remaining budget is written back first.
  if (preempted == CtxKind::handler) {
    NestLevel& outer = nest_.back();
    mem_.poke32(outer.budget_ptr, static_cast<u32>(outer.remaining));
    PortRequest wb{Requester::table_loader, outer.budget_ptr, 1, true, t_par,
                   0, 0};
    PortGrant g = mem_.transfer(wb);
    sched.segments.push_back(
        {SegAction::budget_writeback, g.start, g.complete, int(PortId::main)});
    finish = std::max(finish, g.complete);
    auto pend = pending_replenish_.find(outer.budget_ptr);
    if (pend != pending_replenish_.end()) {
      mem_.poke32(outer.budget_ptr, pend->second);
      pending_replenish_.erase(pend);
    }
  }

  NestLevel lvl;
  lvl.int_num = int_num;
  lvl.pmp_ptr = lk.pmp_ptr;
  lvl.budget_ptr = lk.budget_ptr;
  lvl.preempted = preempted;

  // Context save: bank switch when one is free, 33-word spill otherwise.
  const u32 status = pack_status(preempted, preempted_mode,
                                 preempted == CtxKind::handler
                                     ? nest_.back().int_num
                                     : 0);
  int free_bank = -1;
  for (unsigned i = 0; i < bank_busy_.size(); ++i) {
    if (!bank_busy_[i]) {
      free_bank = static_cast<int>(i);
      break;
    }
  }
  if (free_bank >= 0) {
    RegBank& old = st_.bank();
    old.epc = preempted_pc;
    old.status = status;
    lvl.spilled = false;
    lvl.prev_bank = st_.active_bank;
    st_.active_bank = static_cast<unsigned>(free_bank);
    bank_busy_[free_bank] = true;
    st_.bank().zero();
  } else {
    check_stack_room();
    PortRequest sp{Requester::ctx_engine, stack_top_, kFrameWords, true, t_par,
                   cal.ctx_lead_cycles, 0};
    PortGrant g = mem_.transfer(sp);
    const PortId port = mem_.find(stack_top_)->port();
    sched.segments.push_back(
        {SegAction::ctx_save, g.start, g.complete, int(port)});
    finish = std::max(finish, g.complete);
    RegBank& bank = st_.bank();
    for (unsigned i = 0; i < 31; ++i)
      mem_.poke32(stack_top_ + 4 * i, bank.x[i]);
    mem_.poke32(stack_top_ + 4 * 31, preempted_pc);
    mem_.poke32(stack_top_ + 4 * 32, status);
    lvl.spilled = true;
    lvl.frame_addr = stack_top_;
    stack_top_ += kFrameWords * 4;
    bank.zero();
  }
  st_.csrs.muiepc = preempted_pc;

  // Kernel-managed PMP context: shadow bank or spill to memory.
  if (preempted != CtxKind::handler) {
    if (vc_.kernel_pmp == KernelPmp::shadow) {
      pmp_.shadow_save();
    } else {
      PortGrant g = pmp_.store_record(mem_, kernel_pmp_spill_addr_, t_par);
      const PortId port = mem_.find(kernel_pmp_spill_addr_)->port();
      sched.segments.push_back(
          {SegAction::pmp_spill, g.start, g.complete, int(port)});
      finish = std::max(finish, g.complete);
    }
  }

  // Handler PMP configuration.
  {
    PortGrant g = pmp_.load_record(mem_, lk.pmp_ptr, t_par);
    const PortId port = mem_.find(lk.pmp_ptr)->port();
    sched.segments.push_back(
        {SegAction::pmp_load, g.start, g.complete, int(port)});
    finish = std::max(finish, g.complete);
  }

  // Budget load and countdown start. The budget table lives in main SRAM.
  {
    PortRequest rd{Requester::table_loader, lk.budget_ptr, kBudgetRecordWords,
                   false, t_par, 0, 0};
    PortGrant g = mem_.transfer(rd);
    const u64 end = g.complete + cal.budget_apply_cycles;
    sched.segments.push_back(
        {SegAction::budget_load, g.start, end, int(PortId::main)});
    finish = std::max(finish, end);
    lvl.remaining = mem_.peek32(lk.budget_ptr);
  }

  sched.segments.push_back(
      {SegAction::redirect, finish, finish + cal.redirect_cycles, -1});
  sched.total = finish + cal.redirect_cycles - now;

  st_.mode = Mode::user;
  nest_.push_back(lvl);
  return sched;
}

UintrEngine::ReturnResult UintrEngine::ret(u64 now) {
  if (nest_.empty()) throw SimFatal("return_uintr with no active handler");
  const Calibration& cal = vc_.cal;
  NestLevel lvl = nest_.back();
  nest_.pop_back();

  ReturnResult res;
  EntrySchedule& sched = res.schedule;
  u64 finish = now;

  // Write back the remaining budget, then apply any deferred replenishment.
  {
    mem_.poke32(lvl.budget_ptr, static_cast<u32>(lvl.remaining));
    PortRequest wb{Requester::table_loader, lvl.budget_ptr, 1, true, now, 0, 0};
    PortGrant g = mem_.transfer(wb);
    sched.segments.push_back(
        {SegAction::budget_writeback, g.start, g.complete, int(PortId::main)});
    finish = std::max(finish, g.complete);
    auto pend = pending_replenish_.find(lvl.budget_ptr);
    if (pend != pending_replenish_.end() && !budget_running(lvl.budget_ptr)) {
      mem_.poke32(lvl.budget_ptr, pend->second);
      pending_replenish_.erase(pend);
    }
  }

  // Restore the protection domain of whatever we preempted.
  if (lvl.preempted == CtxKind::handler) {
    NestLevel& outer = nest_.back();
    PortGrant g = pmp_.load_record(mem_, outer.pmp_ptr, now);
    sched.segments.push_back({SegAction::pmp_restore, g.start, g.complete,
                              int(mem_.find(outer.pmp_ptr)->port())});
    finish = std::max(finish, g.complete);

    PortRequest rd{Requester::table_loader, outer.budget_ptr,
                   kBudgetRecordWords, false, now, 0, 0};
    PortGrant rg = mem_.transfer(rd);
    const u64 end = rg.complete + cal.budget_apply_cycles;
    sched.segments.push_back(
        {SegAction::budget_reload, rg.start, end, int(PortId::main)});
    finish = std::max(finish, end);
    outer.remaining = mem_.peek32(outer.budget_ptr);
  } else if (vc_.kernel_pmp == KernelPmp::shadow) {
    pmp_.shadow_restore();
  } else {
    PortGrant g = pmp_.load_record(mem_, kernel_pmp_spill_addr_, now);
    sched.segments.push_back({SegAction::pmp_restore, g.start, g.complete,
                              int(mem_.find(kernel_pmp_spill_addr_)->port())});
    finish = std::max(finish, g.complete);
  }

  // Register context restore.
  u32 status;
  if (lvl.spilled) {
    PortRequest rd{Requester::ctx_engine, lvl.frame_addr, kFrameWords, false,
                   now, cal.ctx_lead_cycles, 0};
    PortGrant g = mem_.transfer(rd);
    sched.segments.push_back({SegAction::ctx_restore, g.start, g.complete,
                              int(mem_.find(lvl.frame_addr)->port())});
    finish = std::max(finish, g.complete);
    RegBank& bank = st_.bank();
    for (unsigned i = 0; i < 31; ++i)
      bank.x[i] = mem_.peek32(lvl.frame_addr + 4 * i);
    res.resume_pc = mem_.peek32(lvl.frame_addr + 4 * 31);
    status = mem_.peek32(lvl.frame_addr + 4 * 32);
    stack_top_ = lvl.frame_addr;
  } else {
    bank_busy_[st_.active_bank] = false;
    st_.active_bank = lvl.prev_bank;
    res.resume_pc = st_.bank().epc;
    status = st_.bank().status;
  }

  CtxKind kind;
  Mode mode;
  u32 resumed_int;
  unpack_status(status, kind, mode, resumed_int);
  res.resumed_kind = kind;
  res.resume_mode = mode;
  res.resumed_int_num = resumed_int;
  st_.mode = mode;
  st_.csrs.muiepc = res.resume_pc;

  sched.segments.push_back(
      {SegAction::redirect, finish, finish + cal.redirect_cycles, -1});
  sched.total = finish + cal.redirect_cycles - now;
  return res;
}

UintrEngine::ReturnResult UintrEngine::force_return(u32 cause, u64 now) {
  st_.csrs.muicause = cause;
  return ret(now);
}

u64 UintrEngine::consume_budget(u64 cost) {
  if (nest_.empty()) return cost;
  NestLevel& lvl = nest_.back();
  const u64 allowed = std::min<u64>(cost, lvl.remaining);
  lvl.remaining -= allowed;
  lvl.consumed += allowed;
  return allowed;
}

u64 UintrEngine::active_remaining() const {
  return nest_.empty() ? 0 : nest_.back().remaining;
}

u64 UintrEngine::active_consumed() const {
  return nest_.empty() ? 0 : nest_.back().consumed;
}

void UintrEngine::replenish(u32 budget_ptr, u32 capacity) {
  if (budget_running(budget_ptr)) {
    pending_replenish_[budget_ptr] = capacity;
  } else {
    mem_.poke32(budget_ptr, capacity);
  }
}

u32 UintrEngine::active_int_num() const {
  return nest_.empty() ? 0 : nest_.back().int_num;
}

u8 UintrEngine::active_prio() const {
  return nest_.empty() ? 0 : priority(nest_.back().int_num);
}

CtxKind UintrEngine::outermost_preempted() const {
  return nest_.empty() ? CtxKind::thread : nest_.front().preempted;
}

}  // namespace usim
