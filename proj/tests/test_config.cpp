// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/config.hpp"

using namespace usim;

TEST_CASE("default configuration parses and validates") {
  auto ini = IniFile::parse(kDefaultConfigText);
  auto cfg = RunConfig::from_ini(ini);
  CHECK(cfg.core.hz == 50'000'000);
  CHECK(cfg.variant.name == "v1");
  CHECK(cfg.variant.cal.ack_cycles == 3);
  CHECK(cfg.exp.seed == 1);  // reproducible by default
  CHECK(cfg.scheme.kernel_path == 634);
  CHECK(cfg.scheme.software_pmp_part == 30);
}

TEST_CASE("ini parsing") {
  auto ini = IniFile::parse("[a]\nx = 3\ny = 0x10 # comment\n[b]\nx = hello\n");
  CHECK(ini.get_int("a.x", 0) == 3);
  CHECK(ini.get_int("a.y", 0) == 16);
  CHECK(ini.get("b.x", "") == "hello");
  CHECK(ini.get("missing", "dflt") == "dflt");
  CHECK_THROWS_AS(IniFile::parse("[broken\n"), ConfigError);
  CHECK_THROWS_AS(IniFile::parse("novalue\n"), ConfigError);
  CHECK_THROWS_AS([&] { IniFile::parse("[a]\nx = 3z\n").get_int("a.x", 0); }(),
                  ConfigError);
}

TEST_CASE("preset and explicit variant knobs are mutually exclusive") {
  auto ini = IniFile::parse("[variant]\npreset = v2\nextra_banks = 1\n");
  CHECK_THROWS_AS(RunConfig::from_ini(ini), ConfigError);
}

TEST_CASE("presets map exactly to the published configurations") {
  struct Want {
    const char* name;
    IidMode iid;
    StackPort sp;
    TablePort tp;
    u32 banks;
  };
  const Want wants[] = {
      {"v1", IidMode::table, StackPort::main_sram, TablePort::main_sram, 0},
      {"v2", IidMode::table, StackPort::tcm_stack, TablePort::main_sram, 0},
      {"v3", IidMode::table, StackPort::tcm_stack, TablePort::main_sram, 1},
      {"v4", IidMode::table, StackPort::tcm_stack, TablePort::tcm_table, 1},
      {"v5", IidMode::cam, StackPort::tcm_stack, TablePort::tcm_table, 1},
  };
  for (const auto& w : wants) {
    auto ini = IniFile::parse(std::string("[variant]\npreset = ") + w.name);
    auto cfg = RunConfig::from_ini(ini);
    CHECK(cfg.variant.iid == w.iid);
    CHECK(cfg.variant.stack_port == w.sp);
    CHECK(cfg.variant.table_port == w.tp);
    CHECK(cfg.variant.extra_banks == w.banks);
    CHECK(cfg.variant.kernel_pmp == KernelPmp::shadow);
    if (w.iid == IidMode::cam) CHECK(cfg.variant.cam_entries == 16);
  }
}

TEST_CASE("infeasible IID placements are rejected at load") {
  auto cam_in_ram = IniFile::parse("[variant]\niid = cam_in_ram\n");
  CHECK_THROWS_WITH_AS(RunConfig::from_ini(cam_in_ram),
                       doctest::Contains("parallel lookup"), ConfigError);
  auto table_in_cpu = IniFile::parse("[variant]\niid = table_in_cpu\n");
  CHECK_THROWS_AS(RunConfig::from_ini(table_in_cpu), ConfigError);
}

TEST_CASE("explicit knobs build a custom variant") {
  auto ini = IniFile::parse(
      "[variant]\niid = cam\ncam_entries = 32\nstack_port = tcm_stack\n"
      "table_port = tcm_table\nextra_banks = 2\nkernel_pmp = spill\n");
  auto cfg = RunConfig::from_ini(ini);
  CHECK(cfg.variant.iid == IidMode::cam);
  CHECK(cfg.variant.cam_entries == 32);
  CHECK(cfg.variant.extra_banks == 2);
  CHECK(cfg.variant.kernel_pmp == KernelPmp::spill);
  CHECK(cfg.variant.name == "custom");
}

TEST_CASE("bad values are rejected with diagnostics") {
  CHECK_THROWS_AS(
      RunConfig::from_ini(IniFile::parse("[variant]\npreset = v9\n")),
      ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_ini(IniFile::parse("[scheme]\nkind = magic\n")),
      ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_ini(IniFile::parse("[variant]\ncam_entries = 20\niid = cam\n")),
      ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_ini(IniFile::parse("[variant]\npmp_entries = 12\n")),
      ConfigError);
}
