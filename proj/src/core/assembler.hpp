// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace usim {

/// A loadable program: little-endian words at a word-aligned origin.
struct ProgramImage {
  u32 origin = 0;
  std::vector<u32> words;
  std::map<std::string, u32> symbols;

  u32 end() const { return origin + static_cast<u32>(words.size()) * 4; }
};

/// One assembler diagnostic; `line` is 1-based.
struct AsmError {
  int line = 0;
  std::string message;
};

/// Result of assembling a source buffer. On failure `errors` is non-empty
/// and the image must not be used.
struct AsmResult {
  ProgramImage image;
  std::vector<AsmError> errors;

  bool ok() const { return errors.empty(); }
  std::string error_text() const;
};

/// Two-pass assembler for the RV32IM subset used by the built-in workloads.
/// Supports labels, `.org`, `.word`, `.space`, `.equ`, the standard
/// mnemonics, and the usual pseudo-instructions (nop/li/la/mv/j/ret/...).
AsmResult assemble(const std::string& source, u32 default_origin = 0);

}  // namespace usim
