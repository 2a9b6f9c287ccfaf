// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/kernel.hpp"

#include <algorithm>

#include "core/devices.hpp"

namespace usim {

const char* scheme_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::ext: return "ext";
    case SchemeKind::kernel: return "kernel";
    case SchemeKind::intel: return "intel";
    case SchemeKind::software: return "software";
  }
  return "?";
}

std::optional<SchemeKind> scheme_by_name(const std::string& s) {
  if (s == "ext") return SchemeKind::ext;
  if (s == "kernel") return SchemeKind::kernel;
  if (s == "intel") return SchemeKind::intel;
  if (s == "software") return SchemeKind::software;
  return std::nullopt;
}

KernelModel::KernelModel(MachineState& st, MemorySystem& mem, PmpUnit& pmp,
                         UintrEngine* engine, const KernelLayout& layout)
    : st_(st), mem_(mem), pmp_(pmp), engine_(engine), layout_(layout) {}

void KernelModel::boot_init(bool enable_extension) {
  if (engine_) {
    u32 ctl = 0;
    if (engine_->variant().iid == IidMode::table) {
      if (layout_.iid_table & 3)
        throw ConfigError("IID table base must be word aligned");
      ctl = layout_.iid_table;
      // Zero the whole table: every source starts on the kernel-level path.
      for (u32 i = 0; i < layout_.iid_entries * kIidRecordWords; ++i)
        mem_.poke32(layout_.iid_table + 4 * i, 0);
    }
    ctl |= kMuictlPresentBit;
    if (enable_extension) ctl |= kMuictlEnableBit;
    st_.csrs.muictl = ctl;
    engine_->write_muistk(layout_.hw_stack_base);
    engine_->set_kernel_pmp_spill_addr(layout_.kernel_pmp_spill);
  } else {
    st_.csrs.muictl = 0;
  }
}

u32 KernelModel::create_process(const PmpSet& domain,
                                std::vector<u32> capabilities) {
  Process p;
  p.id = next_proc_id_++;
  p.domain = domain;
  p.domain.owner = static_cast<i32>(p.id);
  p.capabilities = std::move(capabilities);
  procs_[p.id] = std::move(p);
  return next_proc_id_ - 1;
}

u32 KernelModel::create_thread(u32 proc, u32 entry_pc, u32 sp) {
  Process& p = process(proc);
  Thread t;
  t.id = next_thread_id_++;
  t.proc = proc;
  t.pc = entry_pc;
  t.regs[1] = sp;  // x2
  threads_[t.id] = t;
  p.threads.push_back(t.id);
  rr_queue_.push_back(t.id);
  return t.id;
}

Process& KernelModel::process(u32 id) {
  auto it = procs_.find(id);
  if (it == procs_.end()) throw SimFatal("unknown process id");
  return it->second;
}

Thread& KernelModel::thread(u32 id) {
  auto it = threads_.find(id);
  if (it == threads_.end()) throw SimFatal("unknown thread id");
  return it->second;
}

void KernelModel::block_thread(u32 tid) {
  thread(tid).state = ThreadState::blocked;
}

void KernelModel::unblock_thread(u32 tid) {
  Thread& t = thread(tid);
  if (t.state == ThreadState::blocked) t.state = ThreadState::ready;
}

u32 KernelModel::alloc_pmp_record(Process& p) {
  if (p.pmp_record_addr) {
    // One record per process: later registrations reuse it.
    ++p.pmp_record_refs;
    return p.pmp_record_addr;
  }
  if (next_pmp_slot_ >= layout_.pmp_slots)
    throw SimFatal("out of PMP record slots");
  const u32 stride = 80;  // 2K+1 words, 16-byte aligned slots
  const u32 addr = layout_.pmp_area + next_pmp_slot_++ * stride;
  auto words = pack_pmp_record(p.domain, pmp_.k());
  for (size_t i = 0; i < words.size(); ++i)
    mem_.poke32(addr + 4 * static_cast<u32>(i), words[i]);
  p.pmp_record_addr = addr;
  p.pmp_record_refs = 1;
  return addr;
}

u32 KernelModel::alloc_budget_record(const BudgetPolicy& policy) {
  if (next_budget_slot_ >= layout_.budget_slots)
    throw SimFatal("out of budget record slots");
  const u32 addr = layout_.budget_area + next_budget_slot_++ * 16;
  mem_.poke32(addr + 0, policy.capacity);   // remaining
  mem_.poke32(addr + 4, policy.capacity);   // granted
  mem_.poke32(addr + 8, next_handle_);      // policy_ref
  mem_.poke32(addr + 12, 0);
  return addr;
}

KernelModel::RegResult KernelModel::int_reg(u32 proc, u32 int_num,
                                            u32 entry_pc,
                                            const BudgetPolicy& policy) {
  RegResult res;
  auto pit = procs_.find(proc);
  if (pit == procs_.end()) {
    res.status = SysStatus::einval;
    return res;
  }
  Process& p = pit->second;
  if (!p.may_register(int_num)) {
    res.status = SysStatus::eperm;
    return res;
  }
  for (auto& [h, r] : regs_) {
    if (r.int_num == int_num) {
      res.status = SysStatus::eexist;
      return res;
    }
  }
  try {
    policy.validate();
  } catch (const ConfigError&) {
    res.status = SysStatus::einval;
    return res;
  }

  Registration reg;
  reg.proc = proc;
  reg.int_num = int_num;
  reg.entry_pc = entry_pc;
  reg.policy = policy;

  if (engine_ && engine_->variant().iid == IidMode::cam) {
    // Capacity check before touching anything.
    unsigned used = 0;
    for (auto& [h, r] : regs_)
      if (r.cam_idx >= 0) ++used;
    if (used >= engine_->cam_capacity()) {
      res.status = SysStatus::enospc;
      return res;
    }
  } else if (int_num >= layout_.iid_entries) {
    res.status = SysStatus::enospc;
    return res;
  }

  reg.pmp_ptr = alloc_pmp_record(p);
  reg.budget_ptr = alloc_budget_record(policy);
  reg.handle = next_handle_++;
  reg.next_replenish = policy.period;

  if (engine_) {
    if (engine_->variant().iid == IidMode::cam) {
      reg.cam_idx = engine_->cam_alloc(int_num, reg.pmp_ptr, reg.budget_ptr);
    } else {
      const u32 addr = layout_.iid_table + int_num * kIidRecordWords * 4;
      mem_.poke32(addr + 0, 0);  // registered but disabled until int_ena
      mem_.poke32(addr + 4, int_num);
      mem_.poke32(addr + 8, reg.pmp_ptr);
      mem_.poke32(addr + 12, reg.budget_ptr);
    }
    engine_->set_priority(int_num, 1);
  }

  res.handle = reg.handle;
  next_replenish_ = std::min(next_replenish_, reg.next_replenish);
  regs_[reg.handle] = reg;
  return res;
}

SysStatus KernelModel::int_del(u32 handle) {
  auto it = regs_.find(handle);
  if (it == regs_.end()) return SysStatus::enoent;
  Registration& r = it->second;
  if (engine_ && engine_->handler_active() &&
      engine_->active_int_num() == r.int_num)
    return SysStatus::ebusy;
  if (engine_) {
    engine_->set_source_enabled(r.int_num, false);
    if (r.cam_idx >= 0) engine_->cam_free(static_cast<unsigned>(r.cam_idx));
    else {
      const u32 addr = layout_.iid_table + r.int_num * kIidRecordWords * 4;
      for (u32 i = 0; i < kIidRecordWords; ++i) mem_.poke32(addr + 4 * i, 0);
    }
  }
  Process& p = process(r.proc);
  if (--p.pmp_record_refs == 0) p.pmp_record_addr = 0;
  regs_.erase(it);
  return SysStatus::ok;
}

SysStatus KernelModel::int_prio(u32 handle, u8 prio) {
  auto it = regs_.find(handle);
  if (it == regs_.end()) return SysStatus::enoent;
  if (engine_) engine_->set_priority(it->second.int_num, prio);
  return SysStatus::ok;
}

SysStatus KernelModel::int_ena(u32 handle) {
  auto it = regs_.find(handle);
  if (it == regs_.end()) return SysStatus::enoent;
  it->second.enabled = true;
  if (engine_) engine_->set_source_enabled(it->second.int_num, true);
  return SysStatus::ok;
}

SysStatus KernelModel::int_dis(u32 handle) {
  auto it = regs_.find(handle);
  if (it == regs_.end()) return SysStatus::enoent;
  it->second.enabled = false;
  if (engine_) engine_->set_source_enabled(it->second.int_num, false);
  return SysStatus::ok;
}

const Registration* KernelModel::registration(u32 handle) const {
  auto it = regs_.find(handle);
  return it == regs_.end() ? nullptr : &it->second;
}

const Registration* KernelModel::registration_for(u32 int_num) const {
  for (auto& [h, r] : regs_)
    if (r.int_num == int_num) return &r;
  return nullptr;
}

std::optional<u32> KernelModel::vector(u32 int_num) const {
  const Registration* r = registration_for(int_num);
  if (!r || !r->enabled) return std::nullopt;
  return r->entry_pc;
}

u64 KernelModel::replenish_tick(u64 now) {
  u64 best = kNoEvent;
  for (auto& [h, r] : regs_) {
    while (r.next_replenish <= now) {
      if (engine_) engine_->replenish(r.budget_ptr, r.policy.capacity);
      r.next_replenish += r.policy.period;
    }
    best = std::min(best, r.next_replenish);
  }
  next_replenish_ = best;
  return best;
}

u64 KernelModel::next_replenish() const { return next_replenish_; }

u64 KernelModel::deliver(const SchemeConfig& scheme, const VariantConfig& vc,
                         u32 /*int_num*/, bool target_active) const {
  switch (scheme.kind) {
    case SchemeKind::ext: return predicted_entry_total(vc);
    case SchemeKind::kernel: return scheme.kernel_path;
    case SchemeKind::intel:
      return target_active ? scheme.intel_fast : scheme.kernel_path;
    case SchemeKind::software: return scheme.software_path;
  }
  return 0;
}

unsigned KernelModel::ready_count() const {
  unsigned n = 0;
  for (auto& [id, t] : threads_)
    if (t.state != ThreadState::blocked) ++n;
  return n;
}

u32 KernelModel::running_process() const {
  if (!running_) return 0;
  auto it = threads_.find(running_);
  return it == threads_.end() ? 0 : it->second.proc;
}

void KernelModel::save_running() {
  if (!running_) return;
  Thread& t = thread(running_);
  t.regs = st_.bank().x;
  t.pc = st_.pc;
  if (t.state == ThreadState::running) t.state = ThreadState::ready;
}

void KernelModel::load_thread(Thread& t) {
  st_.bank().x = t.regs;
  st_.pc = t.pc;
  st_.mode = Mode::user;
  t.state = ThreadState::running;
  running_ = t.id;
  pmp_.install(process(t.proc).domain);
}

bool KernelModel::dispatch_first() {
  running_ = 0;
  return switch_to_next();
}

bool KernelModel::switch_to_next() {
  save_running();
  if (rr_queue_.empty()) return false;
  // Round-robin: rotate until a ready thread is found.
  for (size_t n = 0; n < rr_queue_.size(); ++n) {
    u32 tid = rr_queue_.front();
    rr_queue_.erase(rr_queue_.begin());
    rr_queue_.push_back(tid);
    Thread& t = thread(tid);
    if (t.state == ThreadState::blocked) continue;
    if (t.id == running_ && ready_count() > 1) continue;  // prefer another
    load_thread(t);
    return true;
  }
  running_ = 0;
  return false;
}

void KernelModel::handle_ecall() {
  const u32 call = st_.reg(17);  // a7
  const u32 a0 = st_.reg(10), a1 = st_.reg(11), a2 = st_.reg(12),
            a3 = st_.reg(13);
  const u32 proc = running_process();
  i32 ret;
  switch (call) {
    case 1: {  // int_reg(int_num, entry, capacity, period)
      auto r = int_reg(proc, a0, a1, BudgetPolicy{a2, a3});
      ret = r.status == SysStatus::ok ? static_cast<i32>(r.handle)
                                      : static_cast<i32>(r.status);
      break;
    }
    case 2: ret = static_cast<i32>(int_del(a0)); break;
    case 3: ret = static_cast<i32>(int_prio(a0, static_cast<u8>(a1))); break;
    case 4: ret = static_cast<i32>(int_ena(a0)); break;
    case 5: ret = static_cast<i32>(int_dis(a0)); break;
    default: ret = static_cast<i32>(SysStatus::einval); break;
  }
  st_.set_reg(10, static_cast<u32>(ret));
}

}  // namespace usim
