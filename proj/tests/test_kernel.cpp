// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/assembler.hpp"
#include "core/config.hpp"
#include "core/devices.hpp"
#include "core/simulator.hpp"

using namespace usim;

namespace {

RunConfig default_cfg() {
  return RunConfig::from_ini(IniFile::parse(kDefaultConfigText));
}

struct KernelRig {
  std::unique_ptr<Simulator> sim;
  u32 proc = 0;

  explicit KernelRig(Preset p, bool enabled = true) {
    auto cfg = default_cfg();
    SimOptions so = cfg.sim_options();
    so.variant = VariantConfig::preset(p);
    so.variant.cal = cfg.variant.cal;
    so.extension_enabled = enabled;
    sim = std::make_unique<Simulator>(so);
    PmpSet dom;
    dom.entries.resize(so.variant.pmp_entries);
    dom.entries[0] = {0x08000000, 0x08040000, kPermR | kPermX};
    dom.entries[1] = {0x20004000, 0x20008000, kPermR | kPermW};
    proc = sim->kernel()->create_process(
        dom, {kIrqTimer, kIrqTest0, kIrqTest1, kIrqTest2});
  }
  KernelModel& k() { return *sim->kernel(); }
};

}  // namespace

TEST_CASE("boot programs the extension control register") {
  SUBCASE("v5 boot: present and enabled") {
    KernelRig rig(Preset::v5);
    const u32 ctl = rig.sim->state().csrs.muictl;
    CHECK((ctl & kMuictlPresentBit) != 0);
    CHECK((ctl & kMuictlEnableBit) != 0);
  }
  SUBCASE("table-mode boot points at the IID table") {
    KernelRig rig(Preset::v1);
    CHECK(rig.sim->state().csrs.iid_base() == rig.sim->layout().iid_table);
    // The table starts zeroed: everything routes to the kernel path.
    for (u32 i = 0; i < 32; ++i)
      CHECK_FALSE(rig.sim->engine()->iid_probe(i).hit);
  }
  SUBCASE("boot with the extension disabled keeps legacy behavior") {
    KernelRig rig(Preset::v1, false);
    CHECK_FALSE(rig.sim->state().csrs.uintr_enabled());
    CHECK((rig.sim->state().csrs.muictl & kMuictlPresentBit) != 0);
  }
}

TEST_CASE("int_reg") {
  SUBCASE("first registration allocates records, second reuses the PMP one") {
    KernelRig rig(Preset::v1);
    auto r1 = rig.k().int_reg(rig.proc, kIrqTest0, 0x08001000, {1000, 4000});
    REQUIRE(r1.status == SysStatus::ok);
    auto r2 = rig.k().int_reg(rig.proc, kIrqTest1, 0x08002000, {500, 4000});
    REQUIRE(r2.status == SysStatus::ok);
    const Registration* a = rig.k().registration(r1.handle);
    const Registration* b = rig.k().registration(r2.handle);
    CHECK(a->pmp_ptr == b->pmp_ptr);          // per-process record reused
    CHECK(a->budget_ptr != b->budget_ptr);    // fresh budget entry each
    CHECK(rig.sim->mem().peek32(a->budget_ptr) == 1000);
    CHECK(rig.sim->mem().peek32(a->budget_ptr + 4) == 1000);
  }
  SUBCASE("permission and duplicate checks") {
    KernelRig rig(Preset::v1);
    CHECK(rig.k().int_reg(rig.proc, 31, 0x08001000, {100, 400}).status ==
          SysStatus::eperm);
    rig.k().int_reg(rig.proc, kIrqTest0, 0x08001000, {100, 400});
    CHECK(rig.k().int_reg(rig.proc, kIrqTest0, 0x08001000, {100, 400}).status ==
          SysStatus::eexist);
    CHECK(rig.k().int_reg(rig.proc, kIrqTest1, 0x08001000, {500, 400}).status ==
          SysStatus::einval);  // capacity > period
  }
  SUBCASE("the 17th registration on a 16-entry CAM is refused") {
    KernelRig rig(Preset::v5);
    std::vector<u32> caps;
    for (u32 i = 0; i < 17; ++i) caps.push_back(i);
    PmpSet dom;
    dom.entries.resize(8);
    const u32 p = rig.k().create_process(dom, caps);
    for (u32 i = 0; i < 16; ++i) {
      auto r = rig.k().int_reg(p, i, 0x08001000, {100, 400});
      REQUIRE(r.status == SysStatus::ok);
    }
    CHECK(rig.k().int_reg(p, 16, 0x08001000, {100, 400}).status ==
          SysStatus::enospc);
  }
  SUBCASE("table mode bounds registrations to the table size") {
    KernelRig rig(Preset::v1);
    PmpSet dom;
    dom.entries.resize(8);
    const u32 p = rig.k().create_process(dom, {40});
    CHECK(rig.k().int_reg(p, 40, 0x08001000, {100, 400}).status ==
          SysStatus::enospc);
  }
}

TEST_CASE("registration lifecycle") {
  KernelRig rig(Preset::v1);
  auto r = rig.k().int_reg(rig.proc, kIrqTest0, 0x08001000, {1000, 4000});
  REQUIRE(r.status == SysStatus::ok);

  SUBCASE("enable/disable toggle hardware visibility") {
    CHECK_FALSE(rig.sim->engine()->iid_probe(kIrqTest0).hit);
    rig.k().int_ena(r.handle);
    CHECK(rig.sim->engine()->iid_probe(kIrqTest0).hit);
    rig.k().int_dis(r.handle);
    CHECK_FALSE(rig.sim->engine()->iid_probe(kIrqTest0).hit);
  }
  SUBCASE("delete frees the slot and the last PMP reference") {
    CHECK(rig.k().int_del(r.handle) == SysStatus::ok);
    CHECK(rig.k().int_del(r.handle) == SysStatus::enoent);
    CHECK(rig.k().process(rig.proc).pmp_record_addr == 0);
  }
  SUBCASE("invalid handles are rejected") {
    CHECK(rig.k().int_prio(999, 3) == SysStatus::enoent);
    CHECK(rig.k().int_ena(999) == SysStatus::enoent);
  }
}

TEST_CASE("deliver cost model per scheme") {
  auto cfg = default_cfg();
  KernelRig rig(Preset::v5);
  SchemeConfig sc = cfg.scheme;
  const VariantConfig v5 = rig.sim->options().variant;

  sc.kind = SchemeKind::kernel;
  CHECK(rig.k().deliver(sc, v5, 7, true) == 634);
  CHECK(rig.k().deliver(sc, v5, 7, false) == 634);

  sc.kind = SchemeKind::intel;
  CHECK(rig.k().deliver(sc, v5, 7, true) == sc.intel_fast);
  CHECK(rig.k().deliver(sc, v5, 7, false) == 634);  // falls back to kernel

  sc.kind = SchemeKind::software;
  CHECK(rig.k().deliver(sc, v5, 7, false) == 120);
  CHECK(sc.software_pmp_part == 30);

  sc.kind = SchemeKind::ext;
  CHECK(rig.k().deliver(sc, v5, 7, true) == rig.k().deliver(sc, v5, 7, false));
  CHECK(rig.k().deliver(sc, v5, 7, false) == 11);
}

TEST_CASE("api safety: no sequence of calls escapes the process domain") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    KernelRig rig(rng() & 1 ? Preset::v1 : Preset::v5);
    PmpSet dom;
    dom.entries.resize(8);
    dom.entries[0] = {0x20004000 + static_cast<u32>(rng() % 16) * 0x100,
                      0x20005000, kPermR | kPermW};
    dom.entries[1] = {0x08000000, 0x08010000, kPermR | kPermX};
    std::vector<u32> caps = {kIrqTest0, kIrqTest1, kIrqTest2};
    const u32 p = rig.k().create_process(dom, caps);

    std::vector<u32> handles;
    for (int op = 0; op < 30; ++op) {
      switch (rng() % 4) {
        case 0: {
          auto r = rig.k().int_reg(
              p, caps[rng() % caps.size()], 0x08001000,
              {static_cast<u32>(100 + rng() % 200), 4000});
          if (r.status == SysStatus::ok) handles.push_back(r.handle);
          break;
        }
        case 1:
          if (!handles.empty()) rig.k().int_prio(handles[rng() % handles.size()],
                                                 u8(rng() % 20));
          break;
        case 2:
          if (!handles.empty()) rig.k().int_ena(handles[rng() % handles.size()]);
          break;
        default:
          if (!handles.empty()) {
            const size_t i = rng() % handles.size();
            if (rig.k().int_del(handles[i]) == SysStatus::ok)
              handles.erase(handles.begin() + i);
          }
          break;
      }
      // Every live registration's PMP record equals the process domain:
      // a handler can never hold a permission its process lacks.
      for (u32 h : handles) {
        const Registration* r = rig.k().registration(h);
        REQUIRE(r);
        std::vector<u32> words(pmp_record_words(8));
        for (size_t i = 0; i < words.size(); ++i)
          words[i] = rig.sim->mem().peek32(r->pmp_ptr + 4 * u32(i));
        PmpSet rec = unpack_pmp_record(words, 8);
        const PmpSet& pd = rig.k().process(p).domain;
        for (size_t i = 0; i < rec.entries.size(); ++i) {
          CHECK(rec.entries[i].base == pd.entries[i].base);
          CHECK(rec.entries[i].limit == pd.entries[i].limit);
          CHECK((rec.entries[i].perms & ~pd.entries[i].perms) == 0);
        }
      }
    }
  }
}

TEST_CASE("replenishment follows the deferrable-server rule") {
  KernelRig rig(Preset::v1);
  auto r = rig.k().int_reg(rig.proc, kIrqTest0, 0x08001000, {1000, 4000});
  REQUIRE(r.status == SysStatus::ok);
  const u32 bp = rig.k().registration(r.handle)->budget_ptr;

  SUBCASE("depleted entry is reset to capacity at the period boundary") {
    rig.sim->mem().poke32(bp, 0);
    rig.k().replenish_tick(4000);
    CHECK(rig.sim->mem().peek32(bp) == 1000);
  }
  SUBCASE("mid-period the entry is untouched") {
    rig.sim->mem().poke32(bp, 137);
    rig.k().replenish_tick(3999);
    CHECK(rig.sim->mem().peek32(bp) == 137);
  }
  SUBCASE("next replenish cycle advances by whole periods") {
    CHECK(rig.k().next_replenish() == 4000);
    rig.k().replenish_tick(4000);
    CHECK(rig.k().next_replenish() == 8000);
    rig.k().replenish_tick(20000);
    CHECK(rig.k().next_replenish() == 24000);
  }
}

TEST_CASE("round-robin scheduling") {
  auto cfg = default_cfg();
  SimOptions so = cfg.sim_options();
  so.variant = VariantConfig::preset(Preset::v1);
  so.variant.cal = cfg.variant.cal;
  Simulator sim(so);
  auto* k = sim.kernel();

  auto spin = assemble("spin: j spin", 0x08000000);
  REQUIRE(spin.ok());
  sim.load_program(spin.image);

  PmpSet dom;
  dom.entries.resize(8);
  dom.entries[0] = {0x08000000, 0x08040000, kPermR | kPermX};
  const u32 p = k->create_process(dom, {});

  SUBCASE("two threads alternate with the quantum period") {
    const u32 t1 = k->create_thread(p, 0x08000000, 0);
    const u32 t2 = k->create_thread(p, 0x08000000, 0);
    std::vector<u32> order;
    u32 last = 0;
    const u64 horizon = 8 * cfg.core.quantum;
    while (!sim.halted() && sim.cycle() < horizon) {
      sim.step();
      if (k->running_thread() != last) {
        last = k->running_thread();
        order.push_back(last);
      }
    }
    REQUIRE(order.size() >= 4);
    for (size_t i = 2; i < order.size(); ++i) CHECK(order[i] == order[i - 2]);
    CHECK(order[0] != order[1]);
    (void)t1;
    (void)t2;
  }
  SUBCASE("a single thread never switches") {
    k->create_thread(p, 0x08000000, 0);
    sim.run(5 * cfg.core.quantum);
    CHECK_FALSE(sim.kernel_busy());
    CHECK(k->running_thread() == 1);
  }
  SUBCASE("blocked threads are skipped") {
    const u32 t1 = k->create_thread(p, 0x08000000, 0);
    const u32 t2 = k->create_thread(p, 0x08000000, 0);
    k->block_thread(t2);
    sim.run(5 * cfg.core.quantum);
    CHECK(k->running_thread() == t1);
  }
}

TEST_CASE("syscalls work through the trap ABI") {
  auto cfg = default_cfg();
  SimOptions so = cfg.sim_options();
  so.variant = VariantConfig::preset(Preset::v1);
  so.variant.cal = cfg.variant.cal;
  Simulator sim(so);
  auto* k = sim.kernel();

  // int_reg(kIrqTest0, entry, capacity, period) then int_ena(handle).
  auto prog = assemble(R"(
.org 0x08000000
  li   a0, 20        # interrupt number
  li   a1, 0x08001000
  li   a2, 500
  li   a3, 4000
  li   a7, 1         # int_reg
  ecall
  mv   s0, a0        # handle
  li   a1, 9
  li   a7, 3         # int_prio
  ecall
  mv   s1, a0
  mv   a0, s0
  li   a7, 4         # int_ena
  ecall
  mv   s2, a0
spin:
  j spin
)");
  REQUIRE_MESSAGE(prog.ok(), prog.error_text());
  sim.load_program(prog.image);

  PmpSet dom;
  dom.entries.resize(8);
  dom.entries[0] = {0x08000000, 0x08040000, kPermR | kPermX};
  const u32 p = k->create_process(dom, {kIrqTest0});
  k->create_thread(p, 0x08000000, 0);

  sim.run(10'000);
  CHECK(sim.state().reg(18) == 0);              // s2: int_ena ok
  CHECK(static_cast<i32>(sim.state().reg(9)) == 0);  // s1: int_prio ok
  const u32 handle = sim.state().reg(8);
  const Registration* r = k->registration(handle);
  REQUIRE(r);
  CHECK(r->enabled);
  CHECK(sim.engine()->priority(kIrqTest0) == 9);
}
