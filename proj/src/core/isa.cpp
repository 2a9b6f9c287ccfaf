// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/isa.hpp"

namespace usim {

namespace {

inline u8 rd_of(u32 w) { return (w >> 7) & 0x1f; }
inline u8 rs1_of(u32 w) { return (w >> 15) & 0x1f; }
inline u8 rs2_of(u32 w) { return (w >> 20) & 0x1f; }
inline u8 funct3(u32 w) { return (w >> 12) & 0x7; }
inline u8 funct7(u32 w) { return (w >> 25) & 0x7f; }

inline i32 imm_i(u32 w) { return static_cast<i32>(sign_extend(w >> 20, 12)); }

inline i32 imm_s(u32 w) {
  u32 v = ((w >> 25) << 5) | rd_of(w);
  return static_cast<i32>(sign_extend(v, 12));
}

inline i32 imm_b(u32 w) {
  u32 v = (((w >> 31) & 1) << 12) | (((w >> 7) & 1) << 11) |
          (((w >> 25) & 0x3f) << 5) | (((w >> 8) & 0xf) << 1);
  return static_cast<i32>(sign_extend(v, 13));
}

inline i32 imm_u(u32 w) { return static_cast<i32>(w & 0xfffff000u); }

inline i32 imm_j(u32 w) {
  u32 v = (((w >> 31) & 1) << 20) | (((w >> 12) & 0xff) << 12) |
          (((w >> 20) & 1) << 11) | (((w >> 21) & 0x3ff) << 1);
  return static_cast<i32>(sign_extend(v, 21));
}

Instruction make(Op op, u32 w) {
  Instruction in;
  in.op = op;
  in.rd = rd_of(w);
  in.rs1 = rs1_of(w);
  in.rs2 = rs2_of(w);
  in.raw = w;
  return in;
}

}  // namespace

Instruction decode(u32 word) {
  Instruction in;
  in.raw = word;
  const u32 opc = word & 0x7f;
  const u8 f3 = funct3(word);
  const u8 f7 = funct7(word);

  switch (opc) {
    case 0x37: in = make(Op::kLui, word); in.imm = imm_u(word); return in;
    case 0x17: in = make(Op::kAuipc, word); in.imm = imm_u(word); return in;
    case 0x6f: in = make(Op::kJal, word); in.imm = imm_j(word); return in;
    case 0x67:
      if (f3 != 0) break;
      in = make(Op::kJalr, word);
      in.imm = imm_i(word);
      return in;
    case 0x63: {
      Op op;
      switch (f3) {
        case 0: op = Op::kBeq; break;
        case 1: op = Op::kBne; break;
        case 4: op = Op::kBlt; break;
        case 5: op = Op::kBge; break;
        case 6: op = Op::kBltu; break;
        case 7: op = Op::kBgeu; break;
        default: goto illegal;
      }
      in = make(op, word);
      in.imm = imm_b(word);
      return in;
    }
    case 0x03: {
      Op op;
      switch (f3) {
        case 0: op = Op::kLb; break;
        case 1: op = Op::kLh; break;
        case 2: op = Op::kLw; break;
        case 4: op = Op::kLbu; break;
        case 5: op = Op::kLhu; break;
        default: goto illegal;
      }
      in = make(op, word);
      in.imm = imm_i(word);
      return in;
    }
    case 0x23: {
      Op op;
      switch (f3) {
        case 0: op = Op::kSb; break;
        case 1: op = Op::kSh; break;
        case 2: op = Op::kSw; break;
        default: goto illegal;
      }
      in = make(op, word);
      in.imm = imm_s(word);
      return in;
    }
    case 0x13: {
      Op op;
      switch (f3) {
        case 0: op = Op::kAddi; break;
        case 2: op = Op::kSlti; break;
        case 3: op = Op::kSltiu; break;
        case 4: op = Op::kXori; break;
        case 6: op = Op::kOri; break;
        case 7: op = Op::kAndi; break;
        case 1:
          if (f7 != 0) goto illegal;
          op = Op::kSlli;
          break;
        case 5:
          if (f7 == 0x00) op = Op::kSrli;
          else if (f7 == 0x20) op = Op::kSrai;
          else goto illegal;
          break;
        default: goto illegal;
      }
      in = make(op, word);
      in.imm = (op == Op::kSlli || op == Op::kSrli || op == Op::kSrai)
                   ? static_cast<i32>(rs2_of(word))
                   : imm_i(word);
      return in;
    }
    case 0x33: {
      Op op;
      if (f7 == 0x00) {
        switch (f3) {
          case 0: op = Op::kAdd; break;
          case 1: op = Op::kSll; break;
          case 2: op = Op::kSlt; break;
          case 3: op = Op::kSltu; break;
          case 4: op = Op::kXor; break;
          case 5: op = Op::kSrl; break;
          case 6: op = Op::kOr; break;
          case 7: op = Op::kAnd; break;
          default: goto illegal;
        }
      } else if (f7 == 0x20) {
        if (f3 == 0) op = Op::kSub;
        else if (f3 == 5) op = Op::kSra;
        else goto illegal;
      } else if (f7 == 0x01) {
        switch (f3) {
          case 0: op = Op::kMul; break;
          case 1: op = Op::kMulh; break;
          case 2: op = Op::kMulhsu; break;
          case 3: op = Op::kMulhu; break;
          case 4: op = Op::kDiv; break;
          case 5: op = Op::kDivu; break;
          case 6: op = Op::kRem; break;
          case 7: op = Op::kRemu; break;
          default: goto illegal;
        }
      } else {
        goto illegal;
      }
      return make(op, word);
    }
    case 0x0f:
      if (f3 != 0) break;
      return make(Op::kFence, word);
    case 0x73: {
      if (f3 == 0) {
        // Full-word matches for the no-operand system instructions.
        switch (word) {
          case 0x00000073u: return make(Op::kEcall, word);
          case 0x00100073u: return make(Op::kEbreak, word);
          case 0x30200073u: return make(Op::kMret, word);
          case 0x00200073u: return make(Op::kUret, word);
          case 0x10500073u: return make(Op::kWfi, word);
          default: goto illegal;
        }
      }
      Op op;
      switch (f3) {
        case 1: op = Op::kCsrrw; break;
        case 2: op = Op::kCsrrs; break;
        case 3: op = Op::kCsrrc; break;
        case 5: op = Op::kCsrrwi; break;
        case 6: op = Op::kCsrrsi; break;
        case 7: op = Op::kCsrrci; break;
        default: goto illegal;
      }
      in = make(op, word);
      in.csr = static_cast<u16>(word >> 20);
      in.imm = rs1_of(word);  // zimm for the immediate forms
      return in;
    }
    default: break;
  }

illegal:
  Instruction bad;
  bad.raw = word;
  bad.op = Op::kIllegal;
  return bad;
}

bool is_load(Op op) {
  switch (op) {
    case Op::kLb: case Op::kLh: case Op::kLw: case Op::kLbu: case Op::kLhu:
      return true;
    default:
      return false;
  }
}

bool is_store(Op op) {
  return op == Op::kSb || op == Op::kSh || op == Op::kSw;
}

bool is_branch(Op op) {
  switch (op) {
    case Op::kBeq: case Op::kBne: case Op::kBlt:
    case Op::kBge: case Op::kBltu: case Op::kBgeu:
      return true;
    default:
      return false;
  }
}

bool is_csr_op(Op op) {
  switch (op) {
    case Op::kCsrrw: case Op::kCsrrs: case Op::kCsrrc:
    case Op::kCsrrwi: case Op::kCsrrsi: case Op::kCsrrci:
      return true;
    default:
      return false;
  }
}

unsigned mem_width(Op op) {
  switch (op) {
    case Op::kLb: case Op::kLbu: case Op::kSb: return 1;
    case Op::kLh: case Op::kLhu: case Op::kSh: return 2;
    default: return 4;
  }
}

const char* op_name(Op op) {
  switch (op) {
    case Op::kIllegal: return "illegal";
    case Op::kLui: return "lui";
    case Op::kAuipc: return "auipc";
    case Op::kJal: return "jal";
    case Op::kJalr: return "jalr";
    case Op::kBeq: return "beq";
    case Op::kBne: return "bne";
    case Op::kBlt: return "blt";
    case Op::kBge: return "bge";
    case Op::kBltu: return "bltu";
    case Op::kBgeu: return "bgeu";
    case Op::kLb: return "lb";
    case Op::kLh: return "lh";
    case Op::kLw: return "lw";
    case Op::kLbu: return "lbu";
    case Op::kLhu: return "lhu";
    case Op::kSb: return "sb";
    case Op::kSh: return "sh";
    case Op::kSw: return "sw";
    case Op::kAddi: return "addi";
    case Op::kSlti: return "slti";
    case Op::kSltiu: return "sltiu";
    case Op::kXori: return "xori";
    case Op::kOri: return "ori";
    case Op::kAndi: return "andi";
    case Op::kSlli: return "slli";
    case Op::kSrli: return "srli";
    case Op::kSrai: return "srai";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kSll: return "sll";
    case Op::kSlt: return "slt";
    case Op::kSltu: return "sltu";
    case Op::kXor: return "xor";
    case Op::kSrl: return "srl";
    case Op::kSra: return "sra";
    case Op::kOr: return "or";
    case Op::kAnd: return "and";
    case Op::kMul: return "mul";
    case Op::kMulh: return "mulh";
    case Op::kMulhsu: return "mulhsu";
    case Op::kMulhu: return "mulhu";
    case Op::kDiv: return "div";
    case Op::kDivu: return "divu";
    case Op::kRem: return "rem";
    case Op::kRemu: return "remu";
    case Op::kFence: return "fence";
    case Op::kEcall: return "ecall";
    case Op::kEbreak: return "ebreak";
    case Op::kMret: return "mret";
    case Op::kUret: return "uret";
    case Op::kWfi: return "wfi";
    case Op::kCsrrw: return "csrrw";
    case Op::kCsrrs: return "csrrs";
    case Op::kCsrrc: return "csrrc";
    case Op::kCsrrwi: return "csrrwi";
    case Op::kCsrrsi: return "csrrsi";
    case Op::kCsrrci: return "csrrci";
  }
  return "?";
}

}  // namespace usim
