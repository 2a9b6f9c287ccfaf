// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Links only the shared-library C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uintrsim.h"

namespace {

constexpr size_t kBufCap = 1 << 20;

int status_to_exit(usim_status st) {
  switch (st) {
    case USIM_OK: return 0;
    case USIM_ERR_USAGE: return 1;
    case USIM_ERR_CONFIG: return 2;
    case USIM_ERR_CHECK: return 3;
    default: return 1;
  }
}

struct Handle {
  usim_sim* sim = nullptr;
  ~Handle() { usim_destroy(sim); }
};

int open_handle(const std::string& config_path, const std::string& seed,
                Handle& h) {
  usim_status st = config_path.empty()
                       ? usim_create(nullptr, &h.sim)
                       : usim_create_from_file(config_path.c_str(), &h.sim);
  if (st != USIM_OK) {
    std::fprintf(stderr, "error: cannot load configuration (%s)\n",
                 config_path.empty() ? "<default>" : config_path.c_str());
    return status_to_exit(st);
  }
  if (!seed.empty()) {
    st = usim_set(h.sim, "experiment.seed", seed.c_str());
    if (st != USIM_OK) {
      std::fprintf(stderr, "error: bad seed: %s\n", usim_error(h.sim));
      return status_to_exit(st);
    }
  }
  return 0;
}

int report(usim_status st, usim_sim* sim, const std::string& text) {
  std::fputs(text.c_str(), stdout);
  if (st != USIM_OK && st != USIM_ERR_CHECK)
    std::fprintf(stderr, "error: %s\n", usim_error(sim));
  return status_to_exit(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level RV32IM simulator with deterministic user-level "
               "interrupt delivery"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", usim_version());

  std::string config_path, out_dir = ".", seed;
  app.add_option("--config", config_path, "Configuration file (ini)");
  app.add_option("--seed", seed, "Override experiment.seed");
  app.add_option("--out", out_dir, "Output directory for CSV files");

  auto* verify = app.add_subcommand(
      "verify-latency", "Check the per-variant entry-latency anchors");

  auto* run = app.add_subcommand("run", "Run an experiment");
  std::string experiment;
  run->add_option("experiment", experiment,
                  "latency | isolate | pto | modbus | sweep")
      ->required();
  std::string scheme = "v5", state = "both", variant = "v1", mix = "mixed";
  unsigned freq = 10000;
  unsigned long long baud = 115200;
  std::string schemes, states, points, sweep_kind = "latency";
  run->add_option("--kind", sweep_kind, "sweep: latency | pto | modbus");
  run->add_option("--scheme", scheme,
                  "v1..v5 (extension) or kernel|intel|software");
  run->add_option("--state", state, "latency: active|inactive|both");
  run->add_option("--variant", variant, "isolate: v1..v5");
  run->add_option("--mix", mix, "pto: active|inactive|mixed");
  run->add_option("--freq", freq, "pto: frequency in Hz");
  run->add_option("--baud", baud, "modbus: baud rate in bits/s");
  run->add_option("--schemes", schemes, "sweep: comma list of schemes");
  run->add_option("--states", states, "sweep: comma list of states/mixes");
  run->add_option("--points", points, "sweep: comma list of freqs/bauds");
  std::string samples;
  run->add_option("--samples", samples, "latency: sample count override");

  auto* trace = app.add_subcommand(
      "trace", "Print the entry timeline of a variant as event records");
  std::string tr_variant = "v1";
  bool tr_nested = false;
  trace->add_option("--variant", tr_variant, "v1..v5");
  trace->add_flag("--nested", tr_nested, "entry that preempts a handler");

  auto* dump = app.add_subcommand(
      "config", "Print the built-in default configuration");

  CLI11_PARSE(app, argc, argv);

  if (dump->parsed()) {
    std::fputs(usim_default_config(), stdout);
    return 0;
  }

  Handle h;
  if (int rc = open_handle(config_path, seed, h)) return rc;

  std::vector<char> buf(kBufCap);

  if (verify->parsed()) {
    int failures = 0;
    usim_status st = usim_verify_latency(h.sim, buf.data(), kBufCap, &failures);
    int rc = report(st, h.sim, buf.data());
    if (failures > 0)
      std::fprintf(stderr, "%d latency anchor(s) mismatched\n", failures);
    return rc;
  }

  if (trace->parsed()) {
    usim_status st = usim_trace_entry(h.sim, tr_variant.c_str(),
                                      tr_nested ? 1 : 0, buf.data(), kBufCap);
    return report(st, h.sim, st == USIM_OK ? buf.data() : "");
  }

  // run subcommand
  if (!samples.empty()) {
    usim_status st =
        usim_set(h.sim, "experiment.probe_samples", samples.c_str());
    if (st != USIM_OK) {
      std::fprintf(stderr, "error: bad --samples: %s\n", usim_error(h.sim));
      return status_to_exit(st);
    }
  }

  if (experiment == "latency") {
    const std::string csv = out_dir + "/latency.csv";
    usim_status st = usim_run_latency(h.sim, scheme.c_str(), state.c_str(),
                                      csv.c_str(), buf.data(), kBufCap);
    return report(st, h.sim, st == USIM_OK ? buf.data() : "");
  }
  if (experiment == "isolate") {
    int failures = 0;
    usim_status st = usim_run_isolation(h.sim, variant.c_str(), buf.data(),
                                        kBufCap, &failures);
    int rc = report(st, h.sim, buf.data());
    std::printf("%d/6 cases passed\n", 6 - failures);
    return rc;
  }
  if (experiment == "pto") {
    const std::string csv = out_dir + "/pto.csv";
    usim_status st = usim_run_pto(h.sim, scheme.c_str(), mix.c_str(), freq,
                                  csv.c_str(), buf.data(), kBufCap);
    return report(st, h.sim, st == USIM_OK ? buf.data() : "");
  }
  if (experiment == "modbus") {
    const std::string csv = out_dir + "/modbus.csv";
    usim_status st = usim_run_modbus(h.sim, scheme.c_str(), baud, csv.c_str(),
                                     buf.data(), kBufCap);
    return report(st, h.sim, st == USIM_OK ? buf.data() : "");
  }
  if (experiment == "sweep") {
    if (schemes.empty()) schemes = "v1,v2,v5,kernel,intel,software";
    if (states.empty())
      states = sweep_kind == "pto" ? "mixed" : "active,inactive";
    const std::string csv = out_dir + "/sweep.csv";
    usim_status st =
        usim_run_sweep(h.sim, sweep_kind.c_str(), schemes.c_str(),
                       states.c_str(), points.empty() ? nullptr : points.c_str(),
                       csv.c_str(), buf.data(), kBufCap);
    return report(st, h.sim, st == USIM_OK ? buf.data() : "");
  }
  std::fprintf(stderr, "error: unknown experiment '%s'\n", experiment.c_str());
  return 1;
}
