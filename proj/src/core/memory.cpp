// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/memory.hpp"

#include <algorithm>

namespace usim {

std::vector<PortRequest> arbitrate(std::vector<PortRequest> pending) {
  std::stable_sort(pending.begin(), pending.end(),
                   [](const PortRequest& a, const PortRequest& b) {
                     if (a.who != b.who) return a.who < b.who;
                     if (a.issue_cycle != b.issue_cycle)
                       return a.issue_cycle < b.issue_cycle;
                     return a.seq < b.seq;
                   });
  return pending;
}

MemorySystem::MemorySystem() = default;

void MemorySystem::add_region(Region r) {
  if (r.size == 0) throw ConfigError("memory region with zero size");
  for (auto& ex : regions_) {
    bool overlap = r.base <= ex->base + (ex->size - 1) &&
                   ex->base <= r.base + (r.size - 1);
    if (overlap) throw ConfigError("memory regions overlap");
  }
  auto rp = std::make_unique<Region>(std::move(r));
  if (rp->kind != RegionKind::mmio) rp->bytes.assign(rp->size, 0);
  if (rp->kind == RegionKind::tcm_stack) set_port_present(PortId::tcm_stack, true);
  if (rp->kind == RegionKind::tcm_table) set_port_present(PortId::tcm_table, true);
  regions_.push_back(std::move(rp));
}

const Region* MemorySystem::find(u32 addr) const {
  for (auto& r : regions_)
    if (r->contains(addr)) return r.get();
  return nullptr;
}

Region* MemorySystem::find_mut(u32 addr) {
  for (auto& r : regions_)
    if (r->contains(addr)) return r.get();
  return nullptr;
}

u32 MemorySystem::beat_words(Requester who) const {
  return beat_words_[unsigned(who)];
}

void MemorySystem::set_beat_words(Requester who, u32 words) {
  if (words == 0 || words > 8) throw ConfigError("beat width out of range");
  beat_words_[unsigned(who)] = words;
}

u64 MemorySystem::transfer_duration(Requester who, u32 addr, u32 words,
                                    u32 lead) const {
  const Region* r = find(addr);
  if (!r) throw SimFatal("transfer targets unmapped address");
  const u32 bw = beat_words_[unsigned(who)];
  const u64 beats = (words + bw - 1) / bw;
  u64 beat_cost = r->beat_cycles;
  if (r->kind == RegionKind::mmio && r->device)
    beat_cost += r->device->extra_wait(addr - r->base);
  return lead + 1 + beats * beat_cost;
}

PortGrant MemorySystem::transfer(const PortRequest& req) {
  const Region* r = find(req.addr);
  if (!r) throw SimFatal("transfer targets unmapped address");
  const PortId port = r->port();
  if (!port_present_[unsigned(port)])
    throw ConfigError("transfer targets a port that is not configured");
  u64& free_at = port_free_[unsigned(port)];
  PortGrant g;
  g.start = std::max(req.issue_cycle, free_at);
  g.complete = g.start + transfer_duration(req.who, req.addr, req.words,
                                           req.lead_cycles);
  g.stall = g.start - req.issue_cycle;
  free_at = g.complete;
  if (log_transfers_)
    transfers_.push_back({req.who, port, req.issue_cycle, g.start, g.complete,
                          req.words});
  return g;
}

void MemorySystem::reset_ports() {
  for (auto& f : port_free_) f = 0;
}

u32 MemorySystem::peek32(u32 addr) const {
  const Region* r = find(addr);
  if (!r || r->kind == RegionKind::mmio || !r->contains(addr, 4))
    throw SimFatal("peek32 of unmapped address");
  const u32 off = addr - r->base;
  return u32(r->bytes[off]) | (u32(r->bytes[off + 1]) << 8) |
         (u32(r->bytes[off + 2]) << 16) | (u32(r->bytes[off + 3]) << 24);
}

u16 MemorySystem::peek16(u32 addr) const {
  const Region* r = find(addr);
  if (!r || r->kind == RegionKind::mmio || !r->contains(addr, 2))
    throw SimFatal("peek16 of unmapped address");
  const u32 off = addr - r->base;
  return u16(r->bytes[off]) | (u16(r->bytes[off + 1]) << 8);
}

u8 MemorySystem::peek8(u32 addr) const {
  const Region* r = find(addr);
  if (!r || r->kind == RegionKind::mmio)
    throw SimFatal("peek8 of unmapped address");
  return r->bytes[addr - r->base];
}

void MemorySystem::poke32(u32 addr, u32 value) {
  Region* r = find_mut(addr);
  if (!r || r->kind == RegionKind::mmio || !r->contains(addr, 4))
    throw SimFatal("poke32 of unmapped address");
  const u32 off = addr - r->base;
  r->bytes[off] = value & 0xff;
  r->bytes[off + 1] = (value >> 8) & 0xff;
  r->bytes[off + 2] = (value >> 16) & 0xff;
  r->bytes[off + 3] = (value >> 24) & 0xff;
}

void MemorySystem::poke16(u32 addr, u16 value) {
  Region* r = find_mut(addr);
  if (!r || r->kind == RegionKind::mmio || !r->contains(addr, 2))
    throw SimFatal("poke16 of unmapped address");
  const u32 off = addr - r->base;
  r->bytes[off] = value & 0xff;
  r->bytes[off + 1] = (value >> 8) & 0xff;
}

void MemorySystem::poke8(u32 addr, u8 value) {
  Region* r = find_mut(addr);
  if (!r || r->kind == RegionKind::mmio)
    throw SimFatal("poke8 of unmapped address");
  r->bytes[addr - r->base] = value;
}

std::optional<MemorySystem::DataResult> MemorySystem::data_access(
    u32 addr, unsigned width, bool is_write, u32 store_value, u64 issue_cycle,
    Mode mode) {
  Region* r = find_mut(addr);
  if (!r || !r->contains(addr, width)) return std::nullopt;

  PortRequest req;
  req.who = Requester::core_data;
  req.addr = addr;
  req.words = 1;
  req.is_write = is_write;
  req.issue_cycle = issue_cycle;
  PortGrant g = transfer(req);

  DataResult res;
  res.complete = g.complete;

  if (r->kind == RegionKind::mmio) {
    const u32 off = addr - r->base;
    if (!r->device) return std::nullopt;
    if (is_write) {
      r->device->mmio_write(off, width, store_value, g.complete);
    } else {
      res.value = r->device->mmio_read(off, width, g.complete);
    }
  } else {
    if (is_write) {
      switch (width) {
        case 1: poke8(addr, u8(store_value)); break;
        case 2: poke16(addr, u16(store_value)); break;
        default: poke32(addr, store_value); break;
      }
    } else {
      switch (width) {
        case 1: res.value = peek8(addr); break;
        case 2: res.value = peek16(addr); break;
        default: res.value = peek32(addr); break;
      }
    }
  }

  if (audit_)
    commits_.push_back({g.complete, addr, width, is_write,
                        is_write ? store_value : res.value, mode,
                        Requester::core_data});
  return res;
}

void MemorySystem::load_image(u32 origin, const std::vector<u32>& words) {
  for (size_t i = 0; i < words.size(); ++i)
    poke32(origin + static_cast<u32>(i) * 4, words[i]);
}

}  // namespace usim
