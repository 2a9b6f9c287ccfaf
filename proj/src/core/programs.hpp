// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace usim {

// Assembly sources for the built-in workloads. Addresses are substituted at
// build time so each experiment can lay processes out where it wants them.

/// Tight ALU spin loop; the longest instruction is the 3-cycle jump, which
/// bounds delivery alignment jitter in the latency probe.
std::string spin_loop_src(u32 origin);

/// Latency-probe handler: captures the timer count with the first
/// instruction, then returns.
std::string probe_handler_src(u32 origin);

/// Pulse-train handler: toggles the pin, recomputes the next half-period
/// from the in-memory pulse spec and re-arms the timer.
std::string pto_handler_src(u32 origin, u32 data_addr);

/// Background compute loop that polls a wait-stated sensor register.
std::string sensor_bg_src(u32 origin);

/// Modbus byte handler: drains the UART, folds the byte into a checksum and
/// advances the frame buffer.
std::string modbus_handler_src(u32 origin, u32 data_addr);

/// Frame-recognition stand-in: a calibrated compute loop counting finished
/// frames. `frame_cost` must satisfy (frame_cost - 17) % 3 == 0.
std::string frame_bg_src(u32 origin, u32 counter_addr, u32 frame_cost);

/// Isolation-suite victims and attackers.
std::string victim_thread_src(u32 origin, u32 data_addr);
std::string syscall_victim_src(u32 origin, u32 data_addr);
std::string benign_handler_src(u32 origin, u32 data_addr, u32 spin_iters);
std::string attacker_spatial_src(u32 origin, u32 target_addr);
std::string attacker_temporal_src(u32 origin);
std::string attacker_exception_src(u32 origin);

/// Differential corpus used by the backward-compatibility check: plain
/// RV32IM programs that must behave identically with the extension disabled
/// and with it compiled out.
std::vector<std::pair<std::string, std::string>> compat_corpus(u32 code_origin,
                                                               u32 data_base);

}  // namespace usim
