// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "core/types.hpp"

namespace usim {

enum class IidMode : u8 { table, cam };
enum class StackPort : u8 { main_sram, tcm_stack };
enum class TablePort : u8 { main_sram, tcm_table };
enum class KernelPmp : u8 { shadow, spill };
enum class Preset : u8 { base, v1, v2, v3, v4, v5 };

/// Per-segment cycle constants of the entry/return engine. The shipped
/// defaults are produced by solve_calibration() so that the six latency
/// anchors hold simultaneously; see config/default.ini for the meaning of
/// each knob.
struct Calibration {
  u32 ack_cycles = 3;           // interrupt controller acknowledge
  u32 redirect_cycles = 2;      // pipeline redirect/refill
  u32 iid_dispatch_cycles = 1;  // latch looked-up pointers (table mode only)
  u32 ctx_lead_cycles = 3;      // context engine startup inside its burst
  u32 table_beat_words = 4;     // table-loader bus width, words per beat
  u32 ctx_beat_words = 2;       // context-engine bus width, words per beat
  u32 budget_apply_cycles = 1;  // countdown load after the budget read
  u32 pipeline_fill_cycles = 2; // first fetched instruction -> execute stage
};

/// Placement and sizing knobs selecting one hardware variant.
struct VariantConfig {
  bool present = true;  // false models the base core without the extension
  IidMode iid = IidMode::table;
  u32 cam_entries = 16;
  StackPort stack_port = StackPort::main_sram;
  TablePort table_port = TablePort::main_sram;
  u32 extra_banks = 0;
  KernelPmp kernel_pmp = KernelPmp::shadow;
  u32 pmp_entries = 8;
  Calibration cal;
  std::string name = "custom";

  void validate() const;
  static VariantConfig preset(Preset p);
  static std::optional<Preset> preset_by_name(const std::string& name);
};

/// The latency anchors the calibration must reproduce, in CPU cycles.
struct AnchorSet {
  u32 base = 5;
  u32 v1 = 38;
  u32 v2 = 29;
  u32 v3 = 17;
  u32 v4 = 14;
  u32 v5 = 11;
  u32 v1_spill = 44;
};

constexpr u32 kFrameWords = 33;       // x1..x31 + saved pc + status word
constexpr u32 kIidRecordWords = 4;    // {enabled, int_num, pmp_ptr, budget_ptr}
constexpr u32 kBudgetRecordWords = 4; // {remaining, granted, policy_ref, rsvd}

/// Closed-form entry-latency model: same segment and port rules as the
/// engine but computed directly from the constants, with unit SRAM/TCM beat
/// cost. Used as the independent check on the composed schedules.
u64 predicted_entry_total(const VariantConfig& vc,
                          CtxKind preempted = CtxKind::thread,
                          bool bank_free = true);

/// Search the small constant space for a calibration satisfying every
/// anchor. The redirect cost is pinned to the branch-misprediction penalty.
std::optional<Calibration> solve_calibration(const AnchorSet& anchors,
                                             u32 branch_penalty = 2);

}  // namespace usim
