// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "core/types.hpp"

namespace usim {

/// RV32IM opcode classes plus the system instructions the core understands.
enum class Op : u8 {
  kIllegal = 0,
  // U/J-type
  kLui, kAuipc, kJal, kJalr,
  // branches
  kBeq, kBne, kBlt, kBge, kBltu, kBgeu,
  // loads/stores
  kLb, kLh, kLw, kLbu, kLhu, kSb, kSh, kSw,
  // immediate ALU
  kAddi, kSlti, kSltiu, kXori, kOri, kAndi, kSlli, kSrli, kSrai,
  // register ALU
  kAdd, kSub, kSll, kSlt, kSltu, kXor, kSrl, kSra, kOr, kAnd,
  // M extension
  kMul, kMulh, kMulhsu, kMulhu, kDiv, kDivu, kRem, kRemu,
  // system
  kFence, kEcall, kEbreak, kMret, kUret, kWfi,
  kCsrrw, kCsrrs, kCsrrc, kCsrrwi, kCsrrsi, kCsrrci,
};

/// One decoded instruction. `imm` carries the sign-extended immediate; for
/// CSR instructions `csr` holds the CSR address and `imm` the zimm value.
struct Instruction {
  Op op = Op::kIllegal;
  u8 rd = 0;
  u8 rs1 = 0;
  u8 rs2 = 0;
  i32 imm = 0;
  u16 csr = 0;
  u32 raw = 0;

  bool illegal() const { return op == Op::kIllegal; }
};

/// Decode one 32-bit instruction word. Unknown encodings yield an
/// Instruction with op == Op::kIllegal; decoding never fails.
Instruction decode(u32 word);

bool is_load(Op op);
bool is_store(Op op);
bool is_branch(Op op);
bool is_csr_op(Op op);

/// Access width in bytes for loads/stores (1, 2 or 4).
unsigned mem_width(Op op);

/// Mnemonic for diagnostics and traces.
const char* op_name(Op op);

}  // namespace usim
