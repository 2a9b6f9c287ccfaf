// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/simulator.hpp"

namespace usim {

// ---------------------------------------------------------------- verify --

struct VerifyRow {
  std::string name;
  u64 expected = 0;
  u64 actual = 0;
  u64 predicted = 0;  // closed-form model, must agree with actual

  bool ok() const { return expected == actual && predicted == actual; }
};

/// Entry latency of every preset (plus the V1 spill configuration) measured
/// on an idle machine, against the anchor table and the closed-form model.
std::vector<VerifyRow> verify_latency(const RunConfig& cfg);

/// Compose one idle-machine entry for a variant and hand back the schedule
/// (the rig behind verify_latency, the trace command and several tests).
EntrySchedule trace_entry(const RunConfig& cfg, const VariantConfig& vc,
                          CtxKind preempted = CtxKind::thread);

/// Render a schedule as "cycle,unit,action,port,detail" event lines.
std::string render_schedule(const EntrySchedule& sched);

// ----------------------------------------------------------------- probe --

struct LatencyResult {
  std::vector<u32> samples;
  double avg = 0;
  u32 max = 0;
  u32 min = 0;
};

/// Latency probe: an auto-reload timer fires every `period` cycles, the
/// handler captures the remaining count with its first instruction, and
/// each sample is period - count - read_correction.
LatencyResult run_latency_probe(const RunConfig& cfg, bool target_active,
                                u32 samples = 0);

// ------------------------------------------------------------- isolation --

struct IsolationCase {
  std::string scenario;   // thread | kernel | handler
  std::string violation;  // spatial | temporal
  bool terminated = false;
  u32 cause = 0;
  bool context_intact = false;
  bool no_out_of_domain = false;
  bool pass = false;
};

struct IsolationReport {
  std::vector<IsolationCase> cases;
  bool all_pass = true;
};

IsolationReport run_isolation_suite(const RunConfig& cfg);

// ------------------------------------------------------------------- pto --

enum class MixKind : u8 { active, inactive, mixed };
const char* mix_name(MixKind m);

struct PtoResult {
  u32 freq_hz = 0;
  double jitter_norm = 0;  // peak-to-peak deviation / nominal half-period
  bool sustainable = false;
  u64 edges = 0;
  u64 pp = 0;
};

PtoResult run_pto(const RunConfig& cfg, u32 freq_hz, MixKind mix);

/// Highest frequency from `grid` that is sustainable under `mix`.
u32 max_sustainable_pto(const RunConfig& cfg, MixKind mix,
                        const std::vector<u32>& grid);

// ---------------------------------------------------------------- modbus --

struct ModbusResult {
  u64 baud = 0;
  u32 fps = 0;
  bool sustainable = false;
  u64 bytes = 0;
};

ModbusResult run_modbus(const RunConfig& cfg, u64 baud);

// ----------------------------------------------------------------- sweep --

struct SweepSpec {
  std::string experiment;  // latency | pto | modbus
  std::vector<std::string> schemes;
  std::vector<std::string> states;  // latency: active/inactive; pto: mixes
  std::vector<u64> points;          // pto: freqs; modbus: bauds
};

/// Cartesian product of the matrix, one CSV row per cell, sorted by key.
std::string sweep(const RunConfig& cfg, const SweepSpec& spec);

// CSV schemas (documented interface):
//   latency: scheme,state,avg,max,n
//   pto:     scheme,mix,freq_hz,jitter_norm,sustainable
//   modbus:  scheme,baud,fps,sustainable
std::string latency_csv_header();
std::string pto_csv_header();
std::string modbus_csv_header();
std::string latency_csv_row(const std::string& scheme, const std::string& state,
                            const LatencyResult& r);
std::string pto_csv_row(const std::string& scheme, MixKind mix,
                        const PtoResult& r);
std::string modbus_csv_row(const std::string& scheme, const ModbusResult& r);

/// Apply a scheme/variant shorthand ("v1".."v5" selects the extension with
/// that preset; "kernel"/"intel"/"software" select a baseline) to a config.
void apply_scheme_selector(RunConfig& cfg, const std::string& selector);
std::string scheme_selector_name(const RunConfig& cfg);

}  // namespace usim
