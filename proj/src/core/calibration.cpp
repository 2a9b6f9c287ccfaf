// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "core/variant.hpp"

namespace usim {

void VariantConfig::validate() const {
  if (cam_entries != 16 && cam_entries != 32 && cam_entries != 48)
    throw ConfigError("cam_entries must be 16, 32 or 48");
  if (extra_banks > 3) throw ConfigError("extra_banks must be in [0,3]");
  if (pmp_entries == 0 || pmp_entries > 8)
    throw ConfigError("pmp_entries must be in [1,8]");
  if (cal.table_beat_words == 0 || cal.ctx_beat_words == 0)
    throw ConfigError("beat widths must be nonzero");
}

VariantConfig VariantConfig::preset(Preset p) {
  VariantConfig vc;
  switch (p) {
    case Preset::base:
      vc.present = false;
      vc.name = "base";
      break;
    case Preset::v1:
      vc.iid = IidMode::table;
      vc.stack_port = StackPort::main_sram;
      vc.table_port = TablePort::main_sram;
      vc.extra_banks = 0;
      vc.name = "v1";
      break;
    case Preset::v2:
      vc.iid = IidMode::table;
      vc.stack_port = StackPort::tcm_stack;
      vc.table_port = TablePort::main_sram;
      vc.extra_banks = 0;
      vc.name = "v2";
      break;
    case Preset::v3:
      vc.iid = IidMode::table;
      vc.stack_port = StackPort::tcm_stack;
      vc.table_port = TablePort::main_sram;
      vc.extra_banks = 1;
      vc.name = "v3";
      break;
    case Preset::v4:
      vc.iid = IidMode::table;
      vc.stack_port = StackPort::tcm_stack;
      vc.table_port = TablePort::tcm_table;
      vc.extra_banks = 1;
      vc.name = "v4";
      break;
    case Preset::v5:
      vc.iid = IidMode::cam;
      vc.cam_entries = 16;
      vc.stack_port = StackPort::tcm_stack;
      vc.table_port = TablePort::tcm_table;
      vc.extra_banks = 1;
      vc.name = "v5";
      break;
  }
  vc.kernel_pmp = KernelPmp::shadow;
  return vc;
}

std::optional<Preset> VariantConfig::preset_by_name(const std::string& name) {
  if (name == "base") return Preset::base;
  if (name == "v1") return Preset::v1;
  if (name == "v2") return Preset::v2;
  if (name == "v3") return Preset::v3;
  if (name == "v4") return Preset::v4;
  if (name == "v5") return Preset::v5;
  return std::nullopt;
}

namespace {

inline u64 beats(u32 words, u32 per_beat) {
  return (words + per_beat - 1) / per_beat;
}

}  // namespace

u64 predicted_entry_total(const VariantConfig& vc, CtxKind preempted,
                          bool bank_free) {
  const Calibration& c = vc.cal;
  if (!vc.present) return c.ack_cycles + c.redirect_cycles;

  const u32 pmp_words = 2 * vc.pmp_entries + 1;
  const u64 d_pmp = 1 + beats(pmp_words, c.table_beat_words);
  const u64 d_bud_rd = 1 + beats(kBudgetRecordWords, c.table_beat_words);
  const u64 d_bud_wb = 1 + beats(1, c.table_beat_words);
  const u64 d_ctx = c.ctx_lead_cycles + 1 + beats(kFrameWords, c.ctx_beat_words);

  u64 t = c.ack_cycles;
  if (vc.iid == IidMode::table)
    t += 1 + beats(kIidRecordWords, c.table_beat_words) + c.iid_dispatch_cycles;

  // The parallel phase: one queue per port, fixed priority (context engine
  // wins the grant), FIFO submission order within the table loader.
  const bool spill_ctx = !(vc.extra_banks > 0 && bank_free);
  const bool ctx_on_main = vc.stack_port == StackPort::main_sram;
  const bool pmp_on_main = vc.table_port == TablePort::main_sram;
  const bool kpmp_spill = vc.kernel_pmp == KernelPmp::spill &&
                          preempted != CtxKind::handler;
  const bool nested_wb = preempted == CtxKind::handler;

  u64 main_busy = 0, stack_busy = 0, table_busy = 0;
  u64 finish = 0;

  if (spill_ctx) {
    u64& port = ctx_on_main ? main_busy : stack_busy;
    port += d_ctx;
    finish = std::max(finish, port);
  }
  if (nested_wb) {
    main_busy += d_bud_wb;
    finish = std::max(finish, main_busy);
  }
  if (kpmp_spill) {
    u64& port = pmp_on_main ? main_busy : table_busy;
    port += d_pmp;
    finish = std::max(finish, port);
  }
  {
    u64& port = pmp_on_main ? main_busy : table_busy;
    port += d_pmp;
    finish = std::max(finish, port);
  }
  {
    // The budget table always lives in main SRAM.
    main_busy += d_bud_rd;
    finish = std::max(finish, main_busy + c.budget_apply_cycles);
  }

  return t + finish + c.redirect_cycles;
}

std::optional<Calibration> solve_calibration(const AnchorSet& anchors,
                                             u32 branch_penalty) {
  Calibration c;
  c.redirect_cycles = branch_penalty;
  if (anchors.base <= branch_penalty) return std::nullopt;
  c.ack_cycles = anchors.base - branch_penalty;

  const u32 widths[] = {1, 2, 4};
  for (u32 disp = 0; disp <= 3; ++disp)
    for (u32 lead = 0; lead <= 6; ++lead)
      for (u32 tbw : widths)
        for (u32 cbw : widths)
          for (u32 apply = 0; apply <= 2; ++apply) {
            c.iid_dispatch_cycles = disp;
            c.ctx_lead_cycles = lead;
            c.table_beat_words = tbw;
            c.ctx_beat_words = cbw;
            c.budget_apply_cycles = apply;

            auto total = [&](Preset p, KernelPmp kp = KernelPmp::shadow) {
              VariantConfig vc = VariantConfig::preset(p);
              vc.kernel_pmp = kp;
              vc.cal = c;
              return predicted_entry_total(vc);
            };
            if (total(Preset::base) != anchors.base) continue;
            if (total(Preset::v1) != anchors.v1) continue;
            if (total(Preset::v1, KernelPmp::spill) != anchors.v1_spill) continue;
            if (total(Preset::v2) != anchors.v2) continue;
            if (total(Preset::v3) != anchors.v3) continue;
            if (total(Preset::v4) != anchors.v4) continue;
            if (total(Preset::v5) != anchors.v5) continue;
            return c;
          }
  return std::nullopt;
}

}  // namespace usim
