// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/kernel.hpp"
#include "core/simulator.hpp"
#include "core/variant.hpp"

namespace usim {

/// Parsed key/value configuration with [section] grouping. Keys are stored
/// as "section.key"; values keep their raw text.
class IniFile {
 public:
  static IniFile parse(const std::string& text);
  static IniFile load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& dflt) const;
  i64 get_int(const std::string& key, i64 dflt) const;
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

/// Experiment parameters shared across the harness drivers.
struct ExperimentCfg {
  u64 seed = 1;
  u32 probe_samples = 10000;
  u32 probe_timer_period = 4000;
  u32 probe_read_correction = 3;
  u64 modbus_window = 50'000'000;
  u32 modbus_frame_cost = 350'000;
  u32 pto_edges = 1200;
  u32 workers = 1;
};

/// Everything a run needs: variant/scheme selection, calibration, core
/// timing and experiment knobs. Presets and explicit variant knobs are
/// mutually exclusive.
struct RunConfig {
  VariantConfig variant = VariantConfig::preset(Preset::v1);
  SchemeConfig scheme;
  CoreTiming core;
  MemLayoutCfg mem;
  ExperimentCfg exp;
  u32 sensor_wait = 6;
  bool extension_enabled = true;
  std::string out_dir = ".";
  bool trace = false;

  SimOptions sim_options() const;

  /// Parse a config file (optional) plus command-line style overrides
  /// ("section.key=value"). Unknown keys are configuration errors.
  static RunConfig from_ini(const IniFile& ini);
};

/// The default configuration text shipped with the tool; `verify-latency`
/// and the tests run against exactly these constants.
extern const char* const kDefaultConfigText;

}  // namespace usim
