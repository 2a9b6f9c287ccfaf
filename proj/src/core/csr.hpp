// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdlib>
#include <optional>
#include <string>

#include "core/types.hpp"

namespace usim {

// CSR addresses. The mui* group and the CAM window live in the custom
// machine read/write space (0x7C0-0x7FF).
enum Csr : u16 {
  kCsrMstatus = 0x300,
  kCsrMtvec = 0x305,
  kCsrMscratch = 0x340,
  kCsrMepc = 0x341,
  kCsrMcause = 0x342,

  kCsrMuictl = 0x7C0,
  kCsrMuistk = 0x7C1,
  kCsrMuiepc = 0x7C2,
  kCsrMuicause = 0x7C3,
  kCsrMtime = 0x7C4,
  kCsrMtimeh = 0x7C5,
  kCsrMtimecmp = 0x7C6,
  kCsrMtimecmph = 0x7C7,

  // CAM entry window: iidnumX/iidpmpX/iidtimX triplets, X in [0,16).
  kCsrIidBase = 0x7D0,
};

constexpr unsigned kCamCsrEntries = 16;

constexpr u32 kMuictlEnableBit = 1u << 0;   // global enable
constexpr u32 kMuictlPresentBit = 1u << 1;  // hardware support, read-only

// muicause values.
constexpr u32 kCauseNone = 0;
constexpr u32 kCauseSpatial = 1;
constexpr u32 kCauseTemporal = 2;
constexpr u32 kCauseExceptionBase = 3;  // 3 + architectural cause code

// Architectural exception codes (mcause subset).
constexpr u32 kExcInstrMisaligned = 0;
constexpr u32 kExcInstrAccess = 1;
constexpr u32 kExcIllegal = 2;
constexpr u32 kExcBreakpoint = 3;
constexpr u32 kExcLoadMisaligned = 4;
constexpr u32 kExcLoadAccess = 5;
constexpr u32 kExcStoreMisaligned = 6;
constexpr u32 kExcStoreAccess = 7;
constexpr u32 kExcEcallU = 8;
constexpr u32 kExcEcallM = 11;

/// Architected CSR state. mtime is maintained by the simulator (it pauses
/// while a user-level handler owns the core) and is read through here.
struct CsrFile {
  u32 mstatus = 0;
  u32 mtvec = 0;
  u32 mscratch = 0;
  u32 mepc = 0;
  u32 mcause = 0;

  u32 muictl = 0;
  u32 muistk = 0;
  u32 muiepc = 0;
  u32 muicause = 0;
  u64 mtime = 0;
  u64 mtimecmp = 0;

  bool uintr_enabled() const { return muictl & kMuictlEnableBit; }
  u32 iid_base() const { return muictl & ~0x3u; }
};

/// Name lookup used by the assembler; returns nullopt for unknown names.
inline std::optional<u16> csr_by_name(const std::string& name) {
  if (name == "mstatus") return kCsrMstatus;
  if (name == "mtvec") return kCsrMtvec;
  if (name == "mscratch") return kCsrMscratch;
  if (name == "mepc") return kCsrMepc;
  if (name == "mcause") return kCsrMcause;
  if (name == "muictl") return kCsrMuictl;
  if (name == "muistk") return kCsrMuistk;
  if (name == "muiepc") return kCsrMuiepc;
  if (name == "muicause") return kCsrMuicause;
  if (name == "mtime") return kCsrMtime;
  if (name == "mtimeh") return kCsrMtimeh;
  if (name == "mtimecmp") return kCsrMtimecmp;
  if (name == "mtimecmph") return kCsrMtimecmph;
  if (name.rfind("iidnum", 0) == 0 || name.rfind("iidpmp", 0) == 0 ||
      name.rfind("iidtim", 0) == 0) {
    const int idx = std::atoi(name.c_str() + 6);
    if (idx < 0 || idx >= static_cast<int>(kCamCsrEntries)) return std::nullopt;
    const int field = name[3] == 'n' ? 0 : (name[3] == 'p' ? 1 : 2);
    return static_cast<u16>(kCsrIidBase + 3 * idx + field);
  }
  return std::nullopt;
}

}  // namespace usim
