// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/config.hpp"
#include "core/isa.hpp"
#include "core/simulator.hpp"

using namespace usim;

namespace {

// Independent encoders used as the reference for decode(): bitfields are
// composed here from the instruction-format definitions, not shared with
// the implementation.
u32 ref_rtype(u32 f7, u32 rs2, u32 rs1, u32 f3, u32 rd, u32 opc) {
  return (f7 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | opc;
}
u32 ref_itype(u32 imm12, u32 rs1, u32 f3, u32 rd, u32 opc) {
  return ((imm12 & 0xfff) << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | opc;
}
u32 ref_btype(i32 off, u32 rs2, u32 rs1, u32 f3) {
  u32 v = static_cast<u32>(off);
  u32 w = 0x63 | (f3 << 12);
  w |= ((v >> 12) & 1) << 31;
  w |= ((v >> 5) & 0x3f) << 25;
  w |= (rs2 << 20) | (rs1 << 15);
  w |= ((v >> 1) & 0xf) << 8;
  w |= ((v >> 11) & 1) << 7;
  return w;
}

RunConfig default_cfg() {
  return RunConfig::from_ini(IniFile::parse(kDefaultConfigText));
}

// Bare machine-mode simulator with a tiny program.
struct BareSim {
  SimOptions so;
  std::unique_ptr<Simulator> sim;

  explicit BareSim(const std::vector<u32>& words, u32 origin = 0x08000000) {
    auto cfg = default_cfg();
    so = cfg.sim_options();
    so.variant = VariantConfig::preset(Preset::base);
    so.variant.cal = cfg.variant.cal;
    so.with_kernel = false;
    Simulator* s = new Simulator(so);
    sim.reset(s);
    sim->mem().load_image(origin, words);
    sim->state().pc = origin;
    sim->state().mode = Mode::machine;
  }
};

}  // namespace

TEST_CASE("decode fixed vectors") {
  SUBCASE("canonical nop") {
    auto in = decode(0x00000013);
    CHECK(in.op == Op::kAddi);
    CHECK(in.rd == 0);
    CHECK(in.rs1 == 0);
    CHECK(in.imm == 0);
  }
  SUBCASE("add x1, x2, x3") {
    CHECK(ref_rtype(0, 3, 2, 0, 1, 0x33) == 0x003100b3);
    auto in = decode(0x003100b3);
    CHECK(in.op == Op::kAdd);
    CHECK(in.rd == 1);
    CHECK(in.rs1 == 2);
    CHECK(in.rs2 == 3);
  }
  SUBCASE("reserved encodings are illegal values, not failures") {
    CHECK(decode(0xffffffffu).op == Op::kIllegal);
    CHECK(decode(0x00000000u).op == Op::kIllegal);
  }
}

TEST_CASE("decode matches the reference encoders on random fields") {
  std::mt19937 rng(123);
  for (int i = 0; i < 2000; ++i) {
    const u32 rd = rng() % 32, rs1 = rng() % 32, rs2 = rng() % 32;
    switch (rng() % 4) {
      case 0: {  // R-type add/sub/and/or
        const bool sub = rng() & 1;
        const u32 w = ref_rtype(sub ? 0x20 : 0, rs2, rs1, 0, rd, 0x33);
        auto in = decode(w);
        CHECK(in.op == (sub ? Op::kSub : Op::kAdd));
        CHECK(in.rd == rd);
        CHECK(in.rs1 == rs1);
        CHECK(in.rs2 == rs2);
        break;
      }
      case 1: {  // addi with signed immediate
        const i32 imm = static_cast<i32>(rng() % 4096) - 2048;
        auto in = decode(ref_itype(static_cast<u32>(imm), rs1, 0, rd, 0x13));
        CHECK(in.op == Op::kAddi);
        CHECK(in.imm == imm);
        break;
      }
      case 2: {  // lw
        const i32 imm = static_cast<i32>(rng() % 4096) - 2048;
        auto in = decode(ref_itype(static_cast<u32>(imm), rs1, 2, rd, 0x03));
        CHECK(in.op == Op::kLw);
        CHECK(in.imm == imm);
        break;
      }
      default: {  // beq with even offset
        const i32 off = (static_cast<i32>(rng() % 4096) - 2048) * 2;
        auto in = decode(ref_btype(off, rs2, rs1, 0));
        CHECK(in.op == Op::kBeq);
        CHECK(in.imm == off);
        break;
      }
    }
  }
}

TEST_CASE("instruction cycle costs") {
  SUBCASE("addi takes one cycle") {
    BareSim b({0x00108093, 0x00100073});  // addi x1,x1,1; ebreak
    const u64 c0 = b.sim->cycle();
    b.sim->step();
    CHECK(b.sim->cycle() - c0 == 1);
  }
  SUBCASE("backward taken branch is predicted and costs one cycle") {
    // loop: addi x1,x1,-1 ; bnez x1, loop
    BareSim b({0xfff08093, 0xfe009ee3});
    b.sim->state().set_reg(1, 5);
    b.sim->step();  // addi
    const u64 c0 = b.sim->cycle();
    b.sim->step();  // taken backward bne
    CHECK(b.sim->cycle() - c0 == 1);
  }
  SUBCASE("forward taken branch mispredicts") {
    // beq x0, x0, +8 (forward predicted not-taken, actually taken)
    BareSim b({ref_btype(8, 0, 0, 0), 0x00000013, 0x00100073});
    const u64 c0 = b.sim->cycle();
    b.sim->step();
    CHECK(b.sim->cycle() - c0 == 1 + default_cfg().core.branch_penalty);
  }
  SUBCASE("lw from zero-wait SRAM: one base plus the port access") {
    // lw x1, 0(x2) with x2 -> sram
    BareSim b({0x00012083, 0x00100073});
    b.sim->state().set_reg(2, 0x20000000);
    const u64 c0 = b.sim->cycle();
    b.sim->step();
    CHECK(b.sim->cycle() - c0 == 3);  // 1 + (1 addr + 1 data)
  }
  SUBCASE("mul and div cost the calibrated constants") {
    BareSim b({0x022081b3, 0x0220c233, 0x00100073});  // mul; div
    auto cfg = default_cfg();
    b.sim->state().set_reg(1, 7);
    u64 c0 = b.sim->cycle();
    b.sim->step();
    CHECK(b.sim->cycle() - c0 == cfg.core.mul_cycles);
    c0 = b.sim->cycle();
    b.sim->step();
    CHECK(b.sim->cycle() - c0 == cfg.core.div_cycles);
  }
}

TEST_CASE("x0 write-discard holds over random instruction streams") {
  std::mt19937 rng(99);
  for (int prog = 0; prog < 30; ++prog) {
    std::vector<u32> words;
    for (int i = 0; i < 40; ++i) {
      const u32 rs1 = rng() % 32, rs2 = rng() % 32;
      const u32 f3 = std::array<u32, 4>{0, 4, 6, 7}[rng() % 4];
      if (rng() & 1)
        words.push_back(ref_rtype(0, rs2, rs1, f3, 0, 0x33));  // rd = x0
      else
        words.push_back(
            ref_itype(rng() % 4096, rs1, f3, 0, 0x13));  // rd = x0
    }
    words.push_back(0x00100073);  // ebreak
    BareSim b(words);
    for (unsigned r = 1; r < 32; ++r) b.sim->state().set_reg(r, rng());
    b.sim->run(10'000);
    CHECK(b.sim->state().reg(0) == 0);
    CHECK(b.sim->halted());
  }
}

TEST_CASE("division edge semantics") {
  // div/rem by zero and signed overflow follow the architectural fixups.
  BareSim b({
      0x0220c233,  // div x4, x1, x2
      0x0220e2b3,  // rem x5, x1, x2
      0x00100073,
  });
  auto& st = b.sim->state();
  SUBCASE("divide by zero") {
    st.set_reg(1, 42);
    st.set_reg(2, 0);
    b.sim->run(1000);
    CHECK(st.reg(4) == 0xffffffffu);
    CHECK(st.reg(5) == 42);
  }
  SUBCASE("INT_MIN / -1") {
    st.set_reg(1, 0x80000000u);
    st.set_reg(2, 0xffffffffu);
    b.sim->run(1000);
    CHECK(st.reg(4) == 0x80000000u);
    CHECK(st.reg(5) == 0);
  }
}

TEST_CASE("csr access semantics") {
  auto cfg = default_cfg();
  SimOptions so = cfg.sim_options();
  so.variant = VariantConfig::preset(Preset::v5);
  so.variant.cal = cfg.variant.cal;
  so.with_kernel = false;
  Simulator sim(so);
  auto& st = sim.state();
  st.mode = Mode::machine;

  SUBCASE("muictl write enables and sets the base") {
    auto old = sim.csr_access(kCsrMuictl, CsrOp::write, 0x20000000 | 1);
    REQUIRE(old.has_value());
    CHECK(st.csrs.uintr_enabled());
    CHECK(st.csrs.iid_base() == 0x20000000);
  }
  SUBCASE("hardware-support bit ignores writes") {
    CHECK((st.csrs.muictl & kMuictlPresentBit) != 0);
    sim.csr_access(kCsrMuictl, CsrOp::write, 0);  // try to clear everything
    CHECK((st.csrs.muictl & kMuictlPresentBit) != 0);
  }
  SUBCASE("muistk round-trips") {
    sim.csr_access(kCsrMuistk, CsrOp::write, 0x30000000);
    auto v = sim.csr_access(kCsrMuistk, CsrOp::read, 0);
    REQUIRE(v.has_value());
    CHECK(*v == 0x30000000);
  }
  SUBCASE("unknown CSR and user-mode access raise") {
    CHECK_FALSE(sim.csr_access(0x7b0, CsrOp::read, 0).has_value());
    st.mode = Mode::user;
    CHECK_FALSE(sim.csr_access(kCsrMuictl, CsrOp::read, 0).has_value());
  }
  SUBCASE("cam window reads back what was written") {
    sim.csr_access(kCsrIidBase + 0, CsrOp::write, 17);       // iidnum0
    sim.csr_access(kCsrIidBase + 1, CsrOp::write, 0x1000);   // iidpmp0
    sim.csr_access(kCsrIidBase + 2, CsrOp::write, 0x2000);   // iidtim0
    CHECK(*sim.csr_access(kCsrIidBase + 0, CsrOp::read, 0) == 17);
    CHECK(*sim.csr_access(kCsrIidBase + 1, CsrOp::read, 0) == 0x1000);
    CHECK(*sim.csr_access(kCsrIidBase + 2, CsrOp::read, 0) == 0x2000);
  }
}

TEST_CASE("disabled extension falls back to the kernel-level path") {
  auto cfg = default_cfg();
  SimOptions so = cfg.sim_options();
  so.variant = VariantConfig::preset(Preset::v1);
  so.variant.cal = cfg.variant.cal;
  so.with_kernel = false;
  so.extension_enabled = false;
  Simulator sim(so);
  CHECK_FALSE(sim.state().csrs.uintr_enabled());
  // A pending line with the extension disabled must never take the
  // user-level path: no vector, no kernel, MIE off -> it just stays pending.
  sim.mem().load_image(0x08000000, {0x00000013, 0x00100073});
  sim.state().pc = 0x08000000;
  sim.raise_irq(kIrqTest0);
  sim.run(1000);
  CHECK(sim.halted());
  CHECK(sim.halt_reason() == "ebreak");
}
