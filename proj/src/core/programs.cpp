// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/programs.hpp"

#include <cstdio>

#include "core/devices.hpp"

namespace usim {

namespace {

std::string hex(u32 v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

std::string org(u32 origin) { return ".org " + hex(origin) + "\n"; }

// x0-relative offset of an MMIO register: the window sits at the very top
// of the address space, within reach of a single sign-extended load offset.
std::string off(u32 reg) {
  return std::to_string(-(static_cast<i64>(0x100000000ull) -
                          (kMmioBase + reg)));
}

}  // namespace

std::string spin_loop_src(u32 origin) {
  return org(origin) + R"(
spin:
  addi t0, t0, 1
  addi t1, t1, 2
  xor  t2, t0, t1
  j    spin
)";
}

std::string probe_handler_src(u32 origin) {
  return org(origin) +
         "handler:\n"
         "  lw   a0, " + off(kTimerCount) + "(x0)\n"
         "  uret\n";
}

std::string pto_handler_src(u32 origin, u32 data_addr) {
  return org(origin) +
         "pto:\n"
         "  li   a1, " + hex(data_addr) + "\n"
         "  lw   a2, 0(a1)\n"          // level
         "  xori a2, a2, 1\n"
         "  sw   a2, 0(a1)\n"
         "  sw   a2, " + off(kPulseLevel) + "(x0)\n"  // edge
         "  lw   a3, 4(a1)\n"          // half period
         "  lw   a4, 8(a1)\n"          // per-pulse delta
         "  add  a3, a3, a4\n"
         "  sw   a3, 4(a1)\n"
         "  sw   a3, " + off(kTimerReload) + "(x0)\n"
         "  uret\n";
}

std::string sensor_bg_src(u32 origin) {
  return org(origin) +
         "bg:\n"
         "  lw   t0, " + off(kSensorValue) + "(x0)\n"
         "  mul  t1, t0, t0\n"
         "  add  t2, t2, t1\n"
         "  addi t3, t3, 1\n"
         "  and  t1, t1, t0\n"
         "  j    bg\n";
}

std::string modbus_handler_src(u32 origin, u32 data_addr) {
  // Four rotate-xor rounds approximate the per-byte CRC-16 update cost.
  std::string rounds;
  for (int i = 0; i < 4; ++i)
    rounds +=
        "  slli a3, a2, 1\n"
        "  srli a4, a2, 15\n"
        "  or   a2, a3, a4\n"
        "  xori a2, a2, 0x5b\n"
        "  and  a2, a2, a6\n";
  return org(origin) +
         "mb:\n"
         "  lw   a0, " + off(kUartData) + "(x0)\n"
         "  li   a1, " + hex(data_addr) + "\n"
         "  li   a6, 0xffff\n"
         "  lw   a2, 0(a1)\n"       // checksum accumulator
         "  xor  a2, a2, a0\n" +
         rounds +
         "  sw   a2, 0(a1)\n"
         "  lw   a5, 4(a1)\n"       // bytes seen
         "  addi a5, a5, 1\n"
         "  sw   a5, 4(a1)\n"
         "  uret\n";
}

std::string frame_bg_src(u32 origin, u32 counter_addr, u32 frame_cost) {
  if (frame_cost < 20 || (frame_cost - 17) % 3 != 0)
    throw ConfigError("modbus_frame_cost must satisfy (cost - 17) % 3 == 0");
  const u32 iters = (frame_cost - 17) / 3;
  // Per frame: li(2) + 3*iters + exit mispredict(2) + nop(1) +
  //            li(2) + lw(3) + addi(1) + sw(3) + j(3) = 3*iters + 17.
  return org(origin) +
         "frame:\n"
         "  li   t0, " + std::to_string(iters) + "\n"
         "inner:\n"
         "  mul  t1, t0, t0\n"
         "  addi t0, t0, -1\n"
         "  bnez t0, inner\n"
         "  nop\n"
         "  li   t2, " + hex(counter_addr) + "\n"
         "  lw   t3, 0(t2)\n"
         "  addi t3, t3, 1\n"
         "  sw   t3, 0(t2)\n"
         "  j    frame\n";
}

std::string victim_thread_src(u32 origin, u32 data_addr) {
  return org(origin) +
         "victim:\n"
         "  li   s0, " + hex(data_addr) + "\n"
         "loop:\n"
         "  addi s1, s1, 1\n"
         "  sw   s1, 0(s0)\n"
         "  addi s2, s2, 3\n"
         "  j    loop\n";
}

std::string syscall_victim_src(u32 origin, u32 data_addr) {
  // int_prio(handle in a0) in a loop: keeps the kernel busy periodically so
  // an attack can land inside kernel execution.
  return org(origin) +
         "  li   s0, " + hex(data_addr) + "\n"
         "svloop:\n"
         "  addi s1, s1, 1\n"
         "  sw   s1, 0(s0)\n"
         "  lw   a0, 4(s0)\n"   // handle stashed by the harness
         "  li   a1, 5\n"
         "  li   a7, 3\n"       // int_prio
         "  ecall\n"
         "  j    svloop\n";
}

std::string benign_handler_src(u32 origin, u32 data_addr, u32 spin_iters) {
  return org(origin) +
         "benign:\n"
         "  li   t0, " + std::to_string(spin_iters) + "\n"
         "bspin:\n"
         "  addi t0, t0, -1\n"
         "  bnez t0, bspin\n"
         "  li   t1, " + hex(data_addr) + "\n"
         "  lw   t2, 0(t1)\n"
         "  addi t2, t2, 1\n"
         "  sw   t2, 0(t1)\n"
         "  uret\n";
}

std::string attacker_spatial_src(u32 origin, u32 target_addr) {
  return org(origin) +
         "attack:\n"
         "  li   t0, " + hex(target_addr) + "\n"
         "  li   t1, 0xdead\n"
         "  sw   t1, 0(t0)\n"
         "  uret\n";
}

std::string attacker_temporal_src(u32 origin) {
  return org(origin) +
         "hog:\n"
         "  addi t0, t0, 1\n"
         "  j    hog\n";
}

std::string attacker_exception_src(u32 origin) {
  return org(origin) +
         "crash:\n"
         "  .word 0xffffffff\n"
         "  uret\n";
}

std::vector<std::pair<std::string, std::string>> compat_corpus(u32 code_origin,
                                                               u32 data_base) {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string data = hex(data_base);

  out.emplace_back("alu_mix", org(code_origin) + R"(
  li   t0, 1234
  li   t1, -77
  add  t2, t0, t1
  sub  t3, t0, t1
  xor  t4, t2, t3
  or   t5, t2, t3
  and  t6, t2, t3
  slli s0, t4, 3
  srli s1, t5, 2
  srai s2, t1, 4
  slt  s3, t1, t0
  sltu s4, t0, t1
  ebreak
)");

  out.emplace_back("branch_walk", org(code_origin) + R"(
  li   t0, 0
  li   t1, 25
head:
  addi t0, t0, 1
  blt  t0, t1, head
  li   t2, 0
  beq  t0, t1, fwd
  addi t2, t2, 99
fwd:
  bne  t0, t2, out
  addi t2, t2, 1
out:
  ebreak
)");

  out.emplace_back("muldiv", org(code_origin) + R"(
  li   t0, 48271
  li   t1, -9773
  mul  t2, t0, t1
  mulh t3, t0, t1
  mulhu t4, t0, t1
  mulhsu t5, t0, t1
  div  s0, t0, t1
  divu s1, t0, t1
  rem  s2, t0, t1
  remu s3, t0, t1
  li   t1, 0
  div  s4, t0, t1
  rem  s5, t0, t1
  ebreak
)");

  out.emplace_back("mem_lanes", org(code_origin) +
      "  li   s0, " + data + "\n" + R"(
  li   t0, 0x12345678
  sw   t0, 0(s0)
  sh   t0, 4(s0)
  sb   t0, 6(s0)
  lw   t1, 0(s0)
  lh   t2, 4(s0)
  lhu  t3, 4(s0)
  lb   t4, 6(s0)
  lbu  t5, 6(s0)
  ebreak
)");

  out.emplace_back("call_chain", org(code_origin) + R"(
  li   a0, 5
  call square
  call square
  j    done
square:
  mul  a0, a0, a0
  ret
done:
  ebreak
)");

  out.emplace_back("fib", org(code_origin) +
      "  li   s0, " + data + "\n" + R"(
  li   t0, 0
  li   t1, 1
  li   t2, 20
fib:
  add  t3, t0, t1
  mv   t0, t1
  mv   t1, t3
  sw   t3, 0(s0)
  addi s0, s0, 4
  addi t2, t2, -1
  bnez t2, fib
  ebreak
)");

  out.emplace_back("store_scan", org(code_origin) +
      "  li   s0, " + data + "\n" + R"(
  li   t0, 16
fill:
  sw   t0, 0(s0)
  addi s0, s0, 4
  addi t0, t0, -1
  bnez t0, fill
  li   t1, 0
  li   t2, 16
  li   s1, 64
sum:
  sub  s0, s0, s1
  lw   t3, 0(s0)
  add  t1, t1, t3
  add  s0, s0, s1
  addi t2, t2, -1
  bnez t2, sum
  ebreak
)");

  out.emplace_back("csr_play", org(code_origin) + R"(
  li   t0, 0x55
  csrw mscratch, t0
  csrr t1, mscratch
  csrrsi t2, mscratch, 2
  csrrci t3, mscratch, 1
  csrr t4, mscratch
  ebreak
)");

  out.emplace_back("timer_trap", org(code_origin) + R"(
  la   t0, tvec
  csrw mtvec, t0
  li   t1, 200
  sw   t1, )" + off(kTimerReload) + R"((x0)
  li   t1, 1
  sw   t1, )" + off(kTimerCtrl) + R"((x0)
  csrrsi x0, mstatus, 8
  li   s0, 0
  li   s1, 2000
wait_loop:
  addi s0, s0, 1
  blt  s0, s1, wait_loop
  ebreak
tvec:
  csrr t2, mcause
  csrr t3, mepc
  addi s2, s2, 1
  li   t4, 3
  bne  s2, t4, back
  csrrci x0, mstatus, 8
back:
  mret
)");

  out.emplace_back("shift_mask", org(code_origin) + R"(
  li   t0, 0x80000001
  li   t1, 0
  li   t2, 31
rot:
  srli t3, t0, 1
  slli t4, t0, 31
  or   t0, t3, t4
  add  t1, t1, t0
  addi t2, t2, -1
  bnez t2, rot
  ebreak
)");

  return out;
}

}  // namespace usim
