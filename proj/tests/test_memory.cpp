// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "core/memory.hpp"

using namespace usim;

namespace {

MemorySystem make_mem(bool with_tcm = true) {
  MemorySystem m;
  m.add_region({0x20000000, 0x20000, RegionKind::sram, 1, nullptr, {}});
  m.add_region({0x08000000, 0x40000, RegionKind::flash, 2, nullptr, {}});
  if (with_tcm) {
    m.add_region({0x30000000, 0x2000, RegionKind::tcm_stack, 1, nullptr, {}});
    m.add_region({0x31000000, 0x2000, RegionKind::tcm_table, 1, nullptr, {}});
  }
  m.set_log_transfers(true);
  return m;
}

PortRequest req(Requester who, u32 addr, u32 words, bool write, u64 issue,
                u32 lead = 0, u32 seq = 0) {
  return PortRequest{who, addr, words, write, issue, lead, seq};
}

}  // namespace

TEST_CASE("region validation") {
  MemorySystem m;
  m.add_region({0x1000, 0x100, RegionKind::sram, 1, nullptr, {}});
  CHECK_THROWS_AS(
      m.add_region({0x10ff, 0x10, RegionKind::sram, 1, nullptr, {}}),
      ConfigError);
  CHECK_THROWS_AS(m.add_region({0x2000, 0, RegionKind::sram, 1, nullptr, {}}),
                  ConfigError);
}

TEST_CASE("single transfer on an idle port completes after its duration") {
  auto m = make_mem();
  // Core word read on SRAM: 1 address phase + 1 data beat.
  auto g = m.transfer(req(Requester::core_data, 0x20000000, 1, false, 100));
  CHECK(g.start == 100);
  CHECK(g.complete == 102);
  CHECK(g.stall == 0);
  // Flash charges two cycles per data beat.
  auto g2 = m.transfer(req(Requester::core_data, 0x08000000, 1, false, 200));
  CHECK(g2.complete == 203);
}

TEST_CASE("beat widths differ per requester") {
  auto m = make_mem();
  // 17-word PMP record behind a 4-word table datapath: 1 + ceil(17/4).
  CHECK(m.transfer_duration(Requester::table_loader, 0x20000000, 17) == 6);
  // 33-word frame behind a 2-word context datapath with a 3-cycle lead.
  CHECK(m.transfer_duration(Requester::ctx_engine, 0x20000000, 33, 3) == 21);
  CHECK(m.transfer_duration(Requester::core_data, 0x20000000, 1) == 2);
}

TEST_CASE("same-cycle requests to one port serialize completely") {
  auto m = make_mem();
  // Context spill and a table load both target main SRAM at cycle 0.
  auto ctx = m.transfer(req(Requester::ctx_engine, 0x20001000, 33, true, 0, 3));
  auto tab = m.transfer(req(Requester::table_loader, 0x20000800, 17, false, 0));
  CHECK(ctx.start == 0);
  CHECK(ctx.complete == 21);
  // The second is stalled by the first transfer's full duration.
  CHECK(tab.start == 21);
  CHECK(tab.stall == 21);
  CHECK(tab.complete == 27);
}

TEST_CASE("dedicated ports carry no cross-port stalls") {
  auto m = make_mem();
  auto ctx =
      m.transfer(req(Requester::ctx_engine, 0x30000000, 33, true, 0, 3));
  auto tab = m.transfer(req(Requester::table_loader, 0x20000800, 17, false, 0));
  CHECK(ctx.stall == 0);
  CHECK(tab.stall == 0);
  CHECK(ctx.start == tab.start);
}

TEST_CASE("ports are independent: traffic on B leaves stalls on A unchanged") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const u32 words_a1 = 1 + rng() % 32, words_a2 = 1 + rng() % 32;
    const u64 gap = rng() % 20;

    auto run_a = [&](MemorySystem& m) {
      auto g1 = m.transfer(req(Requester::core_data, 0x20000000, words_a1,
                               false, 0));
      auto g2 = m.transfer(req(Requester::core_data, 0x20000100, words_a2,
                               false, gap));
      return g1.stall + g2.stall;
    };

    auto m1 = make_mem();
    const u64 stalls_quiet = run_a(m1);

    auto m2 = make_mem();
    // Saturate the stack TCM first.
    m2.transfer(req(Requester::ctx_engine, 0x30000000, 64, true, 0));
    const u64 stalls_noisy = run_a(m2);

    CHECK(stalls_quiet == stalls_noisy);
  }
}

TEST_CASE("arbitration order: fixed priority then FIFO") {
  SUBCASE("context engine beats the table loader") {
    auto order = arbitrate({req(Requester::table_loader, 0, 1, false, 5, 0, 0),
                            req(Requester::ctx_engine, 0, 1, false, 5, 0, 1)});
    CHECK(order[0].who == Requester::ctx_engine);
  }
  SUBCASE("table loader beats core data") {
    auto order = arbitrate({req(Requester::core_data, 0, 1, false, 5, 0, 0),
                            req(Requester::table_loader, 0, 1, false, 5, 0, 1)});
    CHECK(order[0].who == Requester::table_loader);
  }
  SUBCASE("within a class, FIFO by issue cycle then submission") {
    auto order = arbitrate({req(Requester::core_data, 4, 1, false, 9, 0, 2),
                            req(Requester::core_data, 8, 1, false, 3, 0, 1),
                            req(Requester::core_data, 12, 1, false, 3, 0, 0)});
    CHECK(order[0].addr == 12);
    CHECK(order[1].addr == 8);
    CHECK(order[2].addr == 4);
  }
  SUBCASE("empty set") { CHECK(arbitrate({}).empty()); }
}

TEST_CASE("conservation: every grant completes after exactly its duration") {
  auto m = make_mem();
  std::mt19937 rng(23);
  std::vector<PortGrant> grants;
  for (int i = 0; i < 200; ++i) {
    const u32 addr = (rng() % 2) ? 0x20000000 + (rng() % 0x1000) * 4
                                 : 0x30000000 + (rng() % 0x100) * 4;
    const Requester who =
        std::array<Requester, 3>{Requester::core_data, Requester::ctx_engine,
                                 Requester::table_loader}[rng() % 3];
    const u32 words = 1 + rng() % 40;
    const u32 lead = rng() % 4;
    const u64 issue = rng() % 5000;
    auto g = m.transfer(req(who, addr, words, rng() & 1, issue, lead));
    CHECK(g.complete - g.start == m.transfer_duration(who, addr, words, lead));
    CHECK(g.start >= issue);
    grants.push_back(g);
  }
  // No transfer lost or duplicated, and per-port holds never overlap.
  CHECK(m.transfers().size() == 200);
  std::map<PortId, std::vector<std::pair<u64, u64>>> holds;
  for (auto& t : m.transfers()) holds[t.port].push_back({t.start, t.complete});
  for (auto& [port, v] : holds) {
    std::sort(v.begin(), v.end());
    for (size_t i = 1; i < v.size(); ++i) CHECK(v[i].first >= v[i - 1].second);
  }
}

TEST_CASE("starvation-freedom: a finite request set is fully granted") {
  auto m = make_mem();
  u64 last = 0;
  for (int i = 0; i < 64; ++i) {
    auto g = m.transfer(req(Requester::core_fetch, 0x20000000, 2, false, 0));
    last = g.complete;
  }
  CHECK(last > 0);
  CHECK(m.transfers().size() == 64);
}

TEST_CASE("data access routes and bounds-checks") {
  auto m = make_mem();
  SUBCASE("read back a poked word with byte lanes") {
    m.poke32(0x20000010, 0x11223344);
    auto r = m.data_access(0x20000010, 4, false, 0, 0, Mode::machine);
    REQUIRE(r.has_value());
    CHECK(r->value == 0x11223344);
    CHECK(m.data_access(0x20000011, 1, false, 0, 0, Mode::machine)->value ==
          0x33);
    CHECK(m.data_access(0x20000012, 2, false, 0, 0, Mode::machine)->value ==
          0x1122);
  }
  SUBCASE("unmapped address is a bus fault value") {
    CHECK_FALSE(m.data_access(0x40000000, 4, false, 0, 0, Mode::machine)
                    .has_value());
    // Straddling the end of a region is also unmapped.
    CHECK_FALSE(m.data_access(0x2001fffe, 4, false, 0, 0, Mode::machine)
                    .has_value());
  }
  SUBCASE("a transfer to an unconfigured TCM port is a setup error") {
    auto m2 = make_mem(false);
    CHECK_THROWS_AS(
        m2.transfer(req(Requester::ctx_engine, 0x30000000, 1, true, 0)),
        SimFatal);
  }
}
