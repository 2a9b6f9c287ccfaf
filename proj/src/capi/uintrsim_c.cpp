// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "uintrsim.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "core/config.hpp"
#include "core/experiments.hpp"

using namespace usim;

struct usim_sim {
  IniFile ini;
  std::string error;

  RunConfig config() const { return RunConfig::from_ini(ini); }
};

namespace {

usim_status put_str(const std::string& s, char* buf, size_t cap) {
  if (!buf) return USIM_ERR_USAGE;
  if (s.size() + 1 > cap) return USIM_ERR_BUFFER;
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return USIM_OK;
}

usim_status fail(usim_sim* sim, usim_status st, const std::string& msg) {
  if (sim) sim->error = msg;
  return st;
}

usim_status write_file(usim_sim* sim, const char* path,
                       const std::string& text) {
  if (!path) return USIM_OK;
  std::ofstream f(path, std::ios::trunc);
  if (!f) return fail(sim, USIM_ERR_RUNTIME,
                      std::string("cannot write file: ") + path);
  f << text;
  return USIM_OK;
}

bool known_selector(const char* name) {
  const std::string n = name;
  return (VariantConfig::preset_by_name(n) && n != "base") ||
         scheme_by_name(n).has_value();
}

std::vector<std::string> split_commas(const char* s) {
  std::vector<std::string> out;
  if (!s) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

template <typename Fn>
usim_status guarded(usim_sim* sim, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    return fail(sim, USIM_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(sim, USIM_ERR_RUNTIME, e.what());
  }
}

}  // namespace

extern "C" {

const char* usim_version(void) { return "1.0.0"; }

const char* usim_default_config(void) { return kDefaultConfigText; }

usim_status usim_create(const char* config_text, usim_sim** out) {
  if (!out) return USIM_ERR_USAGE;
  *out = nullptr;
  try {
    auto* sim = new usim_sim;
    sim->ini = IniFile::parse(config_text ? config_text : kDefaultConfigText);
    RunConfig::from_ini(sim->ini);  // validate eagerly
    *out = sim;
    return USIM_OK;
  } catch (const ConfigError&) {
    return USIM_ERR_CONFIG;
  } catch (...) {
    return USIM_ERR_RUNTIME;
  }
}

usim_status usim_create_from_file(const char* path, usim_sim** out) {
  if (!out || !path) return USIM_ERR_USAGE;
  *out = nullptr;
  try {
    auto* sim = new usim_sim;
    sim->ini = IniFile::load(path);
    RunConfig::from_ini(sim->ini);
    *out = sim;
    return USIM_OK;
  } catch (const ConfigError&) {
    return USIM_ERR_CONFIG;
  } catch (...) {
    return USIM_ERR_RUNTIME;
  }
}

void usim_destroy(usim_sim* sim) { delete sim; }

const char* usim_error(const usim_sim* sim) {
  return sim ? sim->error.c_str() : "";
}

usim_status usim_set(usim_sim* sim, const char* key, const char* value) {
  if (!sim || !key || !value) return USIM_ERR_USAGE;
  return guarded(sim, [&] {
    IniFile trial = sim->ini;
    trial.set(key, value);
    RunConfig::from_ini(trial);  // reject bad overrides atomically
    sim->ini = trial;
    return USIM_OK;
  });
}

usim_status usim_verify_latency(usim_sim* sim, char* buf, size_t cap,
                                int* failures) {
  if (!sim || !failures) return USIM_ERR_USAGE;
  *failures = 0;
  return guarded(sim, [&] {
    auto rows = verify_latency(sim->config());
    std::ostringstream os;
    int bad = 0;
    for (const auto& r : rows) {
      os << r.name << ": expected " << r.expected << " actual " << r.actual
         << " model " << r.predicted << (r.ok() ? " ok" : " MISMATCH") << "\n";
      if (!r.ok()) ++bad;
    }
    *failures = bad;
    usim_status st = put_str(os.str(), buf, cap);
    if (st != USIM_OK) return st;
    return bad == 0 ? USIM_OK : USIM_ERR_CHECK;
  });
}

usim_status usim_trace_entry(usim_sim* sim, const char* variant, int nested,
                             char* buf, size_t cap) {
  if (!sim || !variant) return USIM_ERR_USAGE;
  return guarded(sim, [&] {
    RunConfig cfg = sim->config();
    auto p = VariantConfig::preset_by_name(variant);
    if (!p || *p == Preset::base)
      return fail(sim, USIM_ERR_CONFIG,
                  std::string("not a traceable variant: ") + variant);
    VariantConfig vc = VariantConfig::preset(*p);
    vc.cal = cfg.variant.cal;
    vc.pmp_entries = cfg.variant.pmp_entries;
    auto sched =
        trace_entry(cfg, vc, nested ? CtxKind::handler : CtxKind::thread);
    return put_str(render_schedule(sched), buf, cap);
  });
}

usim_status usim_run_latency(usim_sim* sim, const char* selector,
                             const char* state, const char* out_csv,
                             char* buf, size_t cap) {
  if (!sim || !selector || !state) return USIM_ERR_USAGE;
  if (!known_selector(selector))
    return fail(sim, USIM_ERR_USAGE,
                std::string("unknown scheme selector: ") + selector);
  return guarded(sim, [&] {
    RunConfig cfg = sim->config();
    apply_scheme_selector(cfg, selector);
    const std::string st_s = state;
    std::string csv = latency_csv_header();
    std::ostringstream sum;
    auto one = [&](bool active) {
      LatencyResult r = run_latency_probe(cfg, active);
      csv += latency_csv_row(selector, active ? "active" : "inactive", r);
      sum << selector << " " << (active ? "active" : "inactive") << ": avg "
          << r.avg << " max " << r.max << " min " << r.min << " n "
          << r.samples.size() << "\n";
    };
    if (st_s == "active" || st_s == "both") one(true);
    if (st_s == "inactive" || st_s == "both") one(false);
    if (st_s != "active" && st_s != "inactive" && st_s != "both")
      return fail(sim, USIM_ERR_USAGE, "state must be active|inactive|both");
    usim_status st = write_file(sim, out_csv, csv);
    if (st != USIM_OK) return st;
    return put_str(sum.str(), buf, cap);
  });
}

usim_status usim_run_isolation(usim_sim* sim, const char* variant, char* buf,
                               size_t cap, int* failures) {
  if (!sim || !variant || !failures) return USIM_ERR_USAGE;
  *failures = 0;
  return guarded(sim, [&] {
    RunConfig cfg = sim->config();
    apply_scheme_selector(cfg, variant);
    if (cfg.scheme.kind != SchemeKind::ext)
      return fail(sim, USIM_ERR_USAGE,
                  "the isolation suite applies to extension variants");
    IsolationReport rep = run_isolation_suite(cfg);
    std::ostringstream os;
    int bad = 0;
    for (const auto& c : rep.cases) {
      os << variant << " " << c.scenario << "/" << c.violation << ": "
         << (c.pass ? "pass" : "FAIL") << " (cause=" << c.cause
         << " intact=" << c.context_intact << " confined=" << c.no_out_of_domain
         << ")\n";
      if (!c.pass) ++bad;
    }
    *failures = bad;
    usim_status st = put_str(os.str(), buf, cap);
    if (st != USIM_OK) return st;
    return bad == 0 ? USIM_OK : USIM_ERR_CHECK;
  });
}

usim_status usim_run_pto(usim_sim* sim, const char* selector, const char* mix,
                         unsigned freq_hz, const char* out_csv, char* buf,
                         size_t cap) {
  if (!sim || !selector || !mix || freq_hz == 0) return USIM_ERR_USAGE;
  if (!known_selector(selector))
    return fail(sim, USIM_ERR_USAGE,
                std::string("unknown scheme selector: ") + selector);
  return guarded(sim, [&] {
    RunConfig cfg = sim->config();
    apply_scheme_selector(cfg, selector);
    const std::string m = mix;
    MixKind mk = m == "active"     ? MixKind::active
                 : m == "inactive" ? MixKind::inactive
                 : m == "mixed"    ? MixKind::mixed
                                   : MixKind::mixed;
    if (m != "active" && m != "inactive" && m != "mixed")
      return fail(sim, USIM_ERR_USAGE, "mix must be active|inactive|mixed");
    PtoResult r = run_pto(cfg, freq_hz, mk);
    std::string csv = pto_csv_header() + pto_csv_row(selector, mk, r);
    usim_status st = write_file(sim, out_csv, csv);
    if (st != USIM_OK) return st;
    std::ostringstream sum;
    sum << selector << " " << m << " " << freq_hz << " Hz: jitter "
        << r.jitter_norm * 100.0 << "% pp " << r.pp << " cycles "
        << (r.sustainable ? "sustainable" : "NOT sustainable") << "\n";
    return put_str(sum.str(), buf, cap);
  });
}

usim_status usim_run_modbus(usim_sim* sim, const char* selector,
                            unsigned long long baud, const char* out_csv,
                            char* buf, size_t cap) {
  if (!sim || !selector) return USIM_ERR_USAGE;
  if (!known_selector(selector))
    return fail(sim, USIM_ERR_USAGE,
                std::string("unknown scheme selector: ") + selector);
  return guarded(sim, [&] {
    RunConfig cfg = sim->config();
    apply_scheme_selector(cfg, selector);
    ModbusResult r = run_modbus(cfg, baud);
    std::string csv = modbus_csv_header() + modbus_csv_row(selector, r);
    usim_status st = write_file(sim, out_csv, csv);
    if (st != USIM_OK) return st;
    std::ostringstream sum;
    sum << selector << " " << baud << " bps: " << r.fps << " fps, "
        << r.bytes << " bytes, "
        << (r.sustainable ? "sustainable" : "NOT sustainable") << "\n";
    return put_str(sum.str(), buf, cap);
  });
}

usim_status usim_run_sweep(usim_sim* sim, const char* experiment,
                           const char* schemes, const char* states,
                           const char* points, const char* out_csv, char* buf,
                           size_t cap) {
  if (!sim || !experiment) return USIM_ERR_USAGE;
  return guarded(sim, [&] {
    RunConfig cfg = sim->config();
    SweepSpec spec;
    spec.experiment = experiment;
    spec.schemes = split_commas(schemes);
    spec.states = split_commas(states);
    for (const auto& p : split_commas(points))
      spec.points.push_back(std::stoull(p));
    std::string csv = sweep(cfg, spec);
    usim_status st = write_file(sim, out_csv, csv);
    if (st != USIM_OK) return st;
    return put_str(csv, buf, cap);
  });
}

}  // extern "C"
