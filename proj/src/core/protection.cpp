// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/protection.hpp"

namespace usim {

bool PmpSet::operator==(const PmpSet& other) const {
  if (entries.size() != other.entries.size()) return false;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].base != other.entries[i].base ||
        entries[i].limit != other.entries[i].limit ||
        entries[i].perms != other.entries[i].perms)
      return false;
  }
  return true;
}

std::vector<u32> pack_pmp_record(const PmpSet& set, unsigned k) {
  std::vector<u32> words(pmp_record_words(k), 0);
  u32 perms = 0;
  for (unsigned i = 0; i < k; ++i) {
    PmpEntry e = i < set.entries.size() ? set.entries[i] : PmpEntry{};
    words[2 * i] = e.base;
    words[2 * i + 1] = e.limit;
    perms |= u32(e.perms & 0x7) << (4 * i);
  }
  words[2 * k] = perms;
  return words;
}

PmpSet unpack_pmp_record(const std::vector<u32>& words, unsigned k) {
  if (words.size() < pmp_record_words(k))
    throw ConfigError("short PMP record");
  PmpSet set;
  set.entries.resize(k);
  const u32 perms = words[2 * k];
  for (unsigned i = 0; i < k; ++i) {
    set.entries[i].base = words[2 * i];
    set.entries[i].limit = words[2 * i + 1];
    set.entries[i].perms = (perms >> (4 * i)) & 0x7;
  }
  return set;
}

bool PmpUnit::check(u32 addr, u32 len, Access acc, Mode mode) const {
  if (mode == Mode::machine) return true;
  u8 need;
  switch (acc) {
    case Access::read: need = kPermR; break;
    case Access::write: need = kPermW; break;
    default: need = kPermX; break;
  }
  for (const auto& e : active_.entries) {
    if ((e.perms & need) && e.covers(addr, len)) return true;
  }
  return false;
}

void PmpUnit::install(const PmpSet& set) {
  if (set.entries.size() != k_)
    throw ConfigError("PMP set size does not match pmp_entries");
  active_ = set;
}

PortGrant PmpUnit::load_record(MemorySystem& mem, u32 record_addr,
                               u64 issue_cycle) {
  PortRequest req;
  req.who = Requester::table_loader;
  req.addr = record_addr;
  req.words = pmp_record_words(k_);
  req.is_write = false;
  req.issue_cycle = issue_cycle;
  PortGrant g = mem.transfer(req);

  std::vector<u32> words(req.words);
  for (u32 i = 0; i < req.words; ++i)
    words[i] = mem.peek32(record_addr + 4 * i);
  active_ = unpack_pmp_record(words, k_);
  return g;
}

PortGrant PmpUnit::store_record(MemorySystem& mem, u32 record_addr,
                                u64 issue_cycle) {
  PortRequest req;
  req.who = Requester::table_loader;
  req.addr = record_addr;
  req.words = pmp_record_words(k_);
  req.is_write = true;
  req.issue_cycle = issue_cycle;
  PortGrant g = mem.transfer(req);

  auto words = pack_pmp_record(active_, k_);
  for (u32 i = 0; i < req.words; ++i)
    mem.poke32(record_addr + 4 * i, words[i]);
  return g;
}

void PmpUnit::shadow_save() {
  if (shadow_valid_) throw SimFatal("shadow_save with shadow already valid");
  shadow_ = active_;
  shadow_valid_ = true;
}

void PmpUnit::shadow_restore() {
  if (!shadow_valid_) throw SimFatal("shadow_restore with shadow empty");
  active_ = shadow_;
  shadow_valid_ = false;
}

}  // namespace usim
