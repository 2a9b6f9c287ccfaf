// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/assembler.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "core/csr.hpp"
#include "core/isa.hpp"

namespace usim {

namespace {

struct Token {
  std::string text;
};

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Strips comments (#, ;, //) and splits "label: mnemonic a, b, c".
struct Line {
  int number = 0;
  std::string label;
  std::string mnemonic;
  std::vector<std::string> operands;
};

std::vector<Line> tokenize(const std::string& src,
                           std::vector<AsmError>& errors) {
  std::vector<Line> out;
  std::istringstream ss(src);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    // Comment strip.
    for (size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '#' || raw[i] == ';') { raw.resize(i); break; }
      if (raw[i] == '/' && i + 1 < raw.size() && raw[i + 1] == '/') {
        raw.resize(i);
        break;
      }
    }
    Line ln;
    ln.number = lineno;
    std::string rest = raw;
    // Leading labels (possibly several on one line).
    while (true) {
      size_t ns = rest.find_first_not_of(" \t");
      if (ns == std::string::npos) { rest.clear(); break; }
      rest = rest.substr(ns);
      size_t colon = rest.find(':');
      size_t sp = rest.find_first_of(" \t");
      if (colon != std::string::npos && (sp == std::string::npos || colon < sp)) {
        std::string label = rest.substr(0, colon);
        if (label.empty()) {
          errors.push_back({lineno, "empty label"});
        } else if (!ln.label.empty()) {
          // Emit the first label as its own line entry.
          Line only;
          only.number = lineno;
          only.label = ln.label;
          out.push_back(only);
          ln.label = label;
        } else {
          ln.label = label;
        }
        rest = rest.substr(colon + 1);
        continue;
      }
      break;
    }
    size_t ns = rest.find_first_not_of(" \t");
    if (ns != std::string::npos) {
      rest = rest.substr(ns);
      size_t sp = rest.find_first_of(" \t");
      ln.mnemonic = to_lower(rest.substr(0, sp));
      if (sp != std::string::npos) {
        std::string ops = rest.substr(sp + 1);
        std::string cur;
        int paren = 0;
        for (char c : ops) {
          if (c == '(') ++paren;
          if (c == ')') --paren;
          if (c == ',' && paren == 0) {
            ln.operands.push_back(cur);
            cur.clear();
          } else {
            cur += c;
          }
        }
        ln.operands.push_back(cur);
        for (auto& o : ln.operands) {
          size_t b = o.find_first_not_of(" \t");
          size_t e = o.find_last_not_of(" \t");
          o = (b == std::string::npos) ? "" : o.substr(b, e - b + 1);
        }
        while (!ln.operands.empty() && ln.operands.back().empty())
          ln.operands.pop_back();
      }
    }
    if (!ln.label.empty() || !ln.mnemonic.empty()) out.push_back(ln);
  }
  return out;
}

const std::map<std::string, u8>& reg_names() {
  static const std::map<std::string, u8> m = [] {
    std::map<std::string, u8> r;
    for (u8 i = 0; i < 32; ++i) r["x" + std::to_string(i)] = i;
    const char* abi[] = {"zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2",
                         "s0",   "s1", "a0", "a1", "a2", "a3", "a4", "a5",
                         "a6",   "a7", "s2", "s3", "s4", "s5", "s6", "s7",
                         "s8",   "s9", "s10", "s11", "t3", "t4", "t5", "t6"};
    for (u8 i = 0; i < 32; ++i) r[abi[i]] = i;
    r["fp"] = 8;
    return r;
  }();
  return m;
}

struct Ctx {
  std::map<std::string, u32> symbols;
  std::vector<AsmError>* errors = nullptr;
  int line = 0;
  bool resolving = false;  // pass 2: unknown symbols are errors

  void err(const std::string& m) { errors->push_back({line, m}); }
};

std::optional<u8> parse_reg(Ctx& c, const std::string& s) {
  auto it = reg_names().find(to_lower(s));
  if (it == reg_names().end()) {
    c.err("unknown register '" + s + "'");
    return std::nullopt;
  }
  return it->second;
}

std::optional<i64> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  size_t pos = 0;
  bool neg = false;
  if (s[pos] == '-' || s[pos] == '+') {
    neg = s[pos] == '-';
    ++pos;
  }
  if (pos >= s.size()) return std::nullopt;
  i64 v = 0;
  try {
    size_t used = 0;
    if (s.compare(pos, 2, "0x") == 0 || s.compare(pos, 2, "0X") == 0) {
      v = static_cast<i64>(std::stoull(s.substr(pos + 2), &used, 16));
      used += 2;
    } else {
      v = static_cast<i64>(std::stoll(s.substr(pos), &used, 10));
    }
    if (used != s.size() - pos) return std::nullopt;
  } catch (...) {
    return std::nullopt;
  }
  return neg ? -v : v;
}

// Value expression: integer literal, symbol, or symbol+offset / symbol-offset.
std::optional<i64> parse_value(Ctx& c, const std::string& s) {
  if (auto v = parse_int(s)) return v;
  // split at last +/- that is not at position 0
  for (size_t i = s.size(); i-- > 1;) {
    if (s[i] == '+' || s[i] == '-') {
      auto base = parse_value(c, s.substr(0, i));
      auto off = parse_int(s.substr(i + 1));
      if (base && off) return *base + (s[i] == '+' ? *off : -*off);
      break;
    }
  }
  auto it = c.symbols.find(s);
  if (it != c.symbols.end()) return static_cast<i64>(it->second);
  if (c.resolving) c.err("unknown symbol '" + s + "'");
  return std::nullopt;
}

std::optional<u16> parse_csr(Ctx& c, const std::string& s) {
  if (auto num = csr_by_name(to_lower(s))) return num;
  if (auto v = parse_int(s)) {
    if (*v >= 0 && *v < 0x1000) return static_cast<u16>(*v);
  }
  c.err("unknown CSR '" + s + "'");
  return std::nullopt;
}

// Encoders -------------------------------------------------------------

u32 enc_r(u32 f7, u8 rs2, u8 rs1, u32 f3, u8 rd, u32 opc) {
  return (f7 << 25) | (u32(rs2) << 20) | (u32(rs1) << 15) | (f3 << 12) |
         (u32(rd) << 7) | opc;
}

u32 enc_i(i32 imm, u8 rs1, u32 f3, u8 rd, u32 opc) {
  return (u32(imm & 0xfff) << 20) | (u32(rs1) << 15) | (f3 << 12) |
         (u32(rd) << 7) | opc;
}

u32 enc_s(i32 imm, u8 rs2, u8 rs1, u32 f3) {
  u32 v = u32(imm) & 0xfff;
  return ((v >> 5) << 25) | (u32(rs2) << 20) | (u32(rs1) << 15) | (f3 << 12) |
         ((v & 0x1f) << 7) | 0x23;
}

u32 enc_b(i32 imm, u8 rs2, u8 rs1, u32 f3) {
  u32 v = u32(imm) & 0x1fff;
  u32 w = 0x63 | (f3 << 12);
  w |= ((v >> 12) & 1) << 31;
  w |= ((v >> 5) & 0x3f) << 25;
  w |= (u32(rs2) << 20) | (u32(rs1) << 15);
  w |= ((v >> 1) & 0xf) << 8;
  w |= ((v >> 11) & 1) << 7;
  return w;
}

u32 enc_u(i32 imm, u8 rd, u32 opc) {
  return (u32(imm) & 0xfffff000u) | (u32(rd) << 7) | opc;
}

u32 enc_j(i32 imm, u8 rd) {
  u32 v = u32(imm) & 0x1fffff;
  u32 w = 0x6f | (u32(rd) << 7);
  w |= ((v >> 20) & 1) << 31;
  w |= ((v >> 1) & 0x3ff) << 21;
  w |= ((v >> 11) & 1) << 20;
  w |= ((v >> 12) & 0xff) << 12;
  return w;
}

struct MemOperand {
  i32 offset = 0;
  u8 base = 0;
};

std::optional<MemOperand> parse_mem(Ctx& c, const std::string& s) {
  size_t lp = s.find('(');
  size_t rp = s.rfind(')');
  if (lp == std::string::npos || rp == std::string::npos || rp < lp) {
    c.err("expected offset(reg) operand, got '" + s + "'");
    return std::nullopt;
  }
  std::string offs = s.substr(0, lp);
  if (offs.empty()) offs = "0";
  auto off = parse_value(c, offs);
  auto reg = parse_reg(c, s.substr(lp + 1, rp - lp - 1));
  if (!off || !reg) return std::nullopt;
  if (*off < -2048 || *off > 2047) {
    c.err("memory offset out of range: " + std::to_string(*off));
    return std::nullopt;
  }
  return MemOperand{static_cast<i32>(*off), *reg};
}

bool check_range(Ctx& c, i64 v, i64 lo, i64 hi, const char* what) {
  if (v < lo || v > hi) {
    c.err(std::string(what) + " out of range: " + std::to_string(v));
    return false;
  }
  return true;
}

// How many words a statement occupies; needed by pass 1.
// `li` with a non-12-bit constant and `la` always take two words.
int words_for(Ctx&, const Line& ln) {
  const std::string& m = ln.mnemonic;
  if (m.empty()) return 0;
  if (m == ".word") return static_cast<int>(ln.operands.size());
  if (m == ".space") {
    auto v = ln.operands.empty() ? std::nullopt : parse_int(ln.operands[0]);
    return v ? static_cast<int>((*v + 3) / 4) : 0;
  }
  if (m == ".org" || m == ".equ") return 0;
  if (m == "li") {
    if (ln.operands.size() == 2) {
      if (auto v = parse_int(ln.operands[1])) {
        if (*v >= -2048 && *v <= 2047) return 1;
      }
    }
    return 2;
  }
  if (m == "la") return 2;
  return 1;
}

class Assembler {
 public:
  explicit Assembler(u32 default_origin) { image_.origin = default_origin; }

  AsmResult run(const std::string& src) {
    std::vector<AsmError> errors;
    auto lines = tokenize(src, errors);
    ctx_.errors = &errors;

    // Pass 1: lay out addresses, collect labels and .equ values.
    u32 pc = image_.origin;
    bool origin_set = false;
    for (auto& ln : lines) {
      ctx_.line = ln.number;
      if (!ln.label.empty()) {
        if (ctx_.symbols.count(ln.label)) {
          ctx_.err("duplicate label '" + ln.label + "'");
        } else {
          ctx_.symbols[ln.label] = pc;
        }
      }
      if (ln.mnemonic == ".org") {
        auto v = ln.operands.empty() ? std::nullopt
                                     : parse_int(ln.operands[0]);
        if (!v || (*v & 3)) {
          ctx_.err(".org requires a word-aligned literal address");
          continue;
        }
        if (!origin_set && pc == image_.origin) {
          image_.origin = static_cast<u32>(*v);
          origin_set = true;
        }
        pc = static_cast<u32>(*v);
        if (!ln.label.empty()) ctx_.symbols[ln.label] = pc;
        org_points_.push_back({ln.number, pc});
        continue;
      }
      if (ln.mnemonic == ".equ") {
        if (ln.operands.size() != 2) {
          ctx_.err(".equ requires name, value");
          continue;
        }
        auto v = parse_int(ln.operands[1]);
        if (!v) {
          ctx_.err(".equ value must be a literal");
          continue;
        }
        ctx_.symbols[ln.operands[0]] = static_cast<u32>(*v);
        continue;
      }
      pc += 4 * words_for(ctx_, ln);
    }

    // Pass 2: encode.
    ctx_.resolving = true;
    pc = image_.origin;
    for (auto& ln : lines) {
      ctx_.line = ln.number;
      if (ln.mnemonic.empty()) continue;
      if (ln.mnemonic == ".org") {
        auto v = parse_int(ln.operands[0]);
        if (v) pc = static_cast<u32>(*v);
        continue;
      }
      if (ln.mnemonic == ".equ") continue;
      if (ln.mnemonic == ".word") {
        for (auto& opnd : ln.operands) {
          auto v = parse_value(ctx_, opnd);
          put(pc, v ? static_cast<u32>(*v) : 0);
          pc += 4;
        }
        continue;
      }
      if (ln.mnemonic == ".space") {
        auto v = parse_int(ln.operands[0]);
        if (v)
          for (i64 i = 0; i < (*v + 3) / 4; ++i) { put(pc, 0); pc += 4; }
        continue;
      }
      size_t before = ctx_.errors->size();
      encode(ln, pc);
      if (ctx_.errors->size() != before) {
        // keep addresses consistent even after an error
        pc += 4 * words_for(ctx_, ln);
      }
    }

    image_.symbols = ctx_.symbols;
    AsmResult res;
    res.image = std::move(image_);
    res.errors = std::move(errors);
    if (res.image.words.empty() && res.errors.empty())
      res.errors.push_back({0, "empty program"});
    return res;
  }

 private:
  void put(u32 addr, u32 word) {
    if (addr < image_.origin) {
      ctx_.err("address below image origin");
      return;
    }
    size_t idx = (addr - image_.origin) / 4;
    if (image_.words.size() <= idx) image_.words.resize(idx + 1, 0);
    image_.words[idx] = word;
  }

  void emit(u32& pc, u32 word) {
    put(pc, word);
    pc += 4;
  }

  // Encode a single (possibly pseudo) instruction, advancing pc.
  void encode(const Line& ln, u32& pc) {
    const std::string& m = ln.mnemonic;
    const auto& ops = ln.operands;
    Ctx& c = ctx_;

    auto need = [&](size_t n) {
      if (ops.size() != n) {
        c.err("'" + m + "' expects " + std::to_string(n) + " operands");
        return false;
      }
      return true;
    };
    auto branch_target = [&](const std::string& s) -> std::optional<i32> {
      auto v = parse_value(c, s);
      if (!v) return std::nullopt;
      i64 off = *v - static_cast<i64>(pc);
      if (off & 1) {
        c.err("misaligned branch target");
        return std::nullopt;
      }
      return static_cast<i32>(off);
    };

    // --- ALU register ---
    static const std::map<std::string, std::pair<u32, u32>> rops = {
        {"add", {0x00, 0}}, {"sub", {0x20, 0}}, {"sll", {0x00, 1}},
        {"slt", {0x00, 2}}, {"sltu", {0x00, 3}}, {"xor", {0x00, 4}},
        {"srl", {0x00, 5}}, {"sra", {0x20, 5}}, {"or", {0x00, 6}},
        {"and", {0x00, 7}}, {"mul", {0x01, 0}}, {"mulh", {0x01, 1}},
        {"mulhsu", {0x01, 2}}, {"mulhu", {0x01, 3}}, {"div", {0x01, 4}},
        {"divu", {0x01, 5}}, {"rem", {0x01, 6}}, {"remu", {0x01, 7}}};
    if (auto it = rops.find(m); it != rops.end()) {
      if (!need(3)) return;
      auto rd = parse_reg(c, ops[0]), r1 = parse_reg(c, ops[1]),
           r2 = parse_reg(c, ops[2]);
      if (rd && r1 && r2)
        emit(pc, enc_r(it->second.first, *r2, *r1, it->second.second, *rd, 0x33));
      return;
    }

    // --- ALU immediate ---
    static const std::map<std::string, u32> iops = {
        {"addi", 0}, {"slti", 2}, {"sltiu", 3}, {"xori", 4},
        {"ori", 6},  {"andi", 7}};
    if (auto it = iops.find(m); it != iops.end()) {
      if (!need(3)) return;
      auto rd = parse_reg(c, ops[0]), r1 = parse_reg(c, ops[1]);
      auto v = parse_value(c, ops[2]);
      if (!rd || !r1 || !v) return;
      if (!check_range(c, *v, -2048, 2047, "immediate")) return;
      emit(pc, enc_i(static_cast<i32>(*v), *r1, it->second, *rd, 0x13));
      return;
    }
    if (m == "slli" || m == "srli" || m == "srai") {
      if (!need(3)) return;
      auto rd = parse_reg(c, ops[0]), r1 = parse_reg(c, ops[1]);
      auto v = parse_value(c, ops[2]);
      if (!rd || !r1 || !v) return;
      if (!check_range(c, *v, 0, 31, "shift amount")) return;
      u32 f7 = (m == "srai") ? 0x20 : 0x00;
      u32 f3 = (m == "slli") ? 1 : 5;
      emit(pc, enc_r(f7, static_cast<u8>(*v), *r1, f3, *rd, 0x13));
      return;
    }

    // --- loads/stores ---
    static const std::map<std::string, u32> lops = {
        {"lb", 0}, {"lh", 1}, {"lw", 2}, {"lbu", 4}, {"lhu", 5}};
    if (auto it = lops.find(m); it != lops.end()) {
      if (!need(2)) return;
      auto rd = parse_reg(c, ops[0]);
      auto mo = parse_mem(c, ops[1]);
      if (rd && mo) emit(pc, enc_i(mo->offset, mo->base, it->second, *rd, 0x03));
      return;
    }
    static const std::map<std::string, u32> sops = {
        {"sb", 0}, {"sh", 1}, {"sw", 2}};
    if (auto it = sops.find(m); it != sops.end()) {
      if (!need(2)) return;
      auto rs = parse_reg(c, ops[0]);
      auto mo = parse_mem(c, ops[1]);
      if (rs && mo) emit(pc, enc_s(mo->offset, *rs, mo->base, it->second));
      return;
    }

    // --- branches ---
    static const std::map<std::string, u32> bops = {
        {"beq", 0}, {"bne", 1}, {"blt", 4}, {"bge", 5},
        {"bltu", 6}, {"bgeu", 7}};
    if (auto it = bops.find(m); it != bops.end()) {
      if (!need(3)) return;
      auto r1 = parse_reg(c, ops[0]), r2 = parse_reg(c, ops[1]);
      auto off = branch_target(ops[2]);
      if (!r1 || !r2 || !off) return;
      if (!check_range(c, *off, -4096, 4094, "branch offset")) return;
      emit(pc, enc_b(*off, *r2, *r1, it->second));
      return;
    }
    if (m == "beqz" || m == "bnez") {
      if (!need(2)) return;
      auto r1 = parse_reg(c, ops[0]);
      auto off = branch_target(ops[1]);
      if (!r1 || !off) return;
      if (!check_range(c, *off, -4096, 4094, "branch offset")) return;
      emit(pc, enc_b(*off, 0, *r1, m == "beqz" ? 0 : 1));
      return;
    }

    // --- jumps ---
    if (m == "jal") {
      u8 rd = 1;
      std::string tgt;
      if (ops.size() == 1) {
        tgt = ops[0];
      } else if (ops.size() == 2) {
        auto r = parse_reg(c, ops[0]);
        if (!r) return;
        rd = *r;
        tgt = ops[1];
      } else {
        c.err("'jal' expects 1 or 2 operands");
        return;
      }
      auto off = branch_target(tgt);
      if (!off) return;
      if (!check_range(c, *off, -(1 << 20), (1 << 20) - 2, "jump offset")) return;
      emit(pc, enc_j(*off, rd));
      return;
    }
    if (m == "jalr") {
      if (ops.size() == 1) {
        auto r1 = parse_reg(c, ops[0]);
        if (r1) emit(pc, enc_i(0, *r1, 0, 1, 0x67));
        return;
      }
      if (!need(3)) return;
      auto rd = parse_reg(c, ops[0]), r1 = parse_reg(c, ops[1]);
      auto v = parse_value(c, ops[2]);
      if (!rd || !r1 || !v) return;
      if (!check_range(c, *v, -2048, 2047, "immediate")) return;
      emit(pc, enc_i(static_cast<i32>(*v), *r1, 0, *rd, 0x67));
      return;
    }
    if (m == "j") {
      if (!need(1)) return;
      auto off = branch_target(ops[0]);
      if (!off) return;
      emit(pc, enc_j(*off, 0));
      return;
    }
    if (m == "jr") {
      if (!need(1)) return;
      auto r1 = parse_reg(c, ops[0]);
      if (r1) emit(pc, enc_i(0, *r1, 0, 0, 0x67));
      return;
    }
    if (m == "call") {
      if (!need(1)) return;
      auto off = branch_target(ops[0]);
      if (off) emit(pc, enc_j(*off, 1));
      return;
    }
    if (m == "ret") { emit(pc, enc_i(0, 1, 0, 0, 0x67)); return; }

    // --- U-type ---
    if (m == "lui" || m == "auipc") {
      if (!need(2)) return;
      auto rd = parse_reg(c, ops[0]);
      auto v = parse_value(c, ops[1]);
      if (!rd || !v) return;
      if (!check_range(c, *v, 0, 0xfffff, "upper immediate")) return;
      emit(pc, enc_u(static_cast<i32>(*v << 12), *rd, m == "lui" ? 0x37 : 0x17));
      return;
    }

    // --- pseudo ---
    if (m == "nop") { emit(pc, 0x00000013); return; }
    if (m == "mv") {
      if (!need(2)) return;
      auto rd = parse_reg(c, ops[0]), r1 = parse_reg(c, ops[1]);
      if (rd && r1) emit(pc, enc_i(0, *r1, 0, *rd, 0x13));
      return;
    }
    if (m == "li" || m == "la") {
      if (!need(2)) return;
      auto rd = parse_reg(c, ops[0]);
      auto v = parse_value(c, ops[1]);
      if (!rd || !v) return;
      i64 val = *v;
      if (m == "li" && val >= -2048 && val <= 2047 && parse_int(ops[1])) {
        emit(pc, enc_i(static_cast<i32>(val), 0, 0, *rd, 0x13));
        return;
      }
      u32 uval = static_cast<u32>(val);
      u32 hi = (uval + 0x800) >> 12;
      i32 lo = static_cast<i32>(sign_extend(uval & 0xfff, 12));
      emit(pc, enc_u(static_cast<i32>(hi << 12), *rd, 0x37));
      emit(pc, enc_i(lo, *rd, 0, *rd, 0x13));
      return;
    }

    // --- CSR ---
    static const std::map<std::string, u32> csr_reg = {
        {"csrrw", 1}, {"csrrs", 2}, {"csrrc", 3}};
    static const std::map<std::string, u32> csr_imm = {
        {"csrrwi", 5}, {"csrrsi", 6}, {"csrrci", 7}};
    if (auto it = csr_reg.find(m); it != csr_reg.end()) {
      if (!need(3)) return;
      auto rd = parse_reg(c, ops[0]);
      auto csr = parse_csr(c, ops[1]);
      auto r1 = parse_reg(c, ops[2]);
      if (rd && csr && r1)
        emit(pc, (u32(*csr) << 20) | (u32(*r1) << 15) | (it->second << 12) |
                     (u32(*rd) << 7) | 0x73);
      return;
    }
    if (auto it = csr_imm.find(m); it != csr_imm.end()) {
      if (!need(3)) return;
      auto rd = parse_reg(c, ops[0]);
      auto csr = parse_csr(c, ops[1]);
      auto v = parse_value(c, ops[2]);
      if (!rd || !csr || !v) return;
      if (!check_range(c, *v, 0, 31, "CSR immediate")) return;
      emit(pc, (u32(*csr) << 20) | (u32(*v) << 15) | (it->second << 12) |
                   (u32(*rd) << 7) | 0x73);
      return;
    }
    if (m == "csrr") {
      if (!need(2)) return;
      auto rd = parse_reg(c, ops[0]);
      auto csr = parse_csr(c, ops[1]);
      if (rd && csr)
        emit(pc, (u32(*csr) << 20) | (2u << 12) | (u32(*rd) << 7) | 0x73);
      return;
    }
    if (m == "csrw") {
      if (!need(2)) return;
      auto csr = parse_csr(c, ops[0]);
      auto r1 = parse_reg(c, ops[1]);
      if (csr && r1)
        emit(pc, (u32(*csr) << 20) | (u32(*r1) << 15) | (1u << 12) | 0x73);
      return;
    }

    // --- bare system ---
    if (m == "ecall") { emit(pc, 0x00000073); return; }
    if (m == "ebreak") { emit(pc, 0x00100073); return; }
    if (m == "mret") { emit(pc, 0x30200073); return; }
    if (m == "uret") { emit(pc, 0x00200073); return; }
    if (m == "wfi") { emit(pc, 0x10500073); return; }
    if (m == "fence") { emit(pc, 0x0000000f); return; }

    c.err("unknown mnemonic '" + m + "'");
  }

  Ctx ctx_;
  ProgramImage image_;
  std::vector<std::pair<int, u32>> org_points_;
};

}  // namespace

std::string AsmResult::error_text() const {
  std::string out;
  for (auto& e : errors) {
    out += "line " + std::to_string(e.line) + ": " + e.message + "\n";
  }
  return out;
}

AsmResult assemble(const std::string& source, u32 default_origin) {
  Assembler as(default_origin);
  return as.run(source);
}

}  // namespace usim
