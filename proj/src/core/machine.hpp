// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "core/csr.hpp"
#include "core/types.hpp"

namespace usim {

/// One register bank: the 31 writable GPRs plus the saved resume pc and a
/// packed status word. Banks switch in zero cycles; the status/epc pair
/// travels with the bank exactly as it does with a spilled stack frame.
struct RegBank {
  std::array<u32, 31> x{};  // x1..x31
  u32 epc = 0;
  u32 status = 0;

  void zero() { x.fill(0); epc = 0; status = 0; }
};

/// Architectural core state. x0 is hardwired to zero: reads of register 0
/// always return 0 and writes are discarded.
struct MachineState {
  std::vector<RegBank> banks{1};
  unsigned active_bank = 0;
  u32 pc = 0;
  Mode mode = Mode::machine;
  CsrFile csrs;
  u64 cycle = 0;

  u32 reg(unsigned idx) const {
    return idx == 0 ? 0 : banks[active_bank].x[idx - 1];
  }
  void set_reg(unsigned idx, u32 value) {
    if (idx != 0) banks[active_bank].x[idx - 1] = value;
  }
  RegBank& bank() { return banks[active_bank]; }
  const RegBank& bank() const { return banks[active_bank]; }
};

}  // namespace usim
