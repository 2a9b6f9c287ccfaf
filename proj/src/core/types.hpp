// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace usim {

using u8 = uint8_t;
using u16 = uint16_t;
using u32 = uint32_t;
using u64 = uint64_t;
using i32 = int32_t;
using i64 = int64_t;

/// Privilege level of the core. No supervisor mode is modeled.
enum class Mode : u8 { user = 0, machine = 3 };

/// What kind of execution context currently owns the core.
enum class CtxKind : u8 { thread = 0, kernel = 1, handler = 2 };

/// Raised for malformed configuration or setup mistakes. Setup problems are
/// programmer errors, not simulated faults, so they surface as exceptions.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a simulation reaches a state the experiment declared fatal
/// (e.g. the hardware save stack overflows its region).
class SimFatal : public std::runtime_error {
 public:
  explicit SimFatal(const std::string& msg) : std::runtime_error(msg) {}
};

inline u32 sign_extend(u32 value, unsigned bits) {
  const u32 m = 1u << (bits - 1);
  return (value ^ m) - m;
}

}  // namespace usim
