// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <vector>

#include "core/memory.hpp"
#include "core/types.hpp"

namespace usim {

constexpr u32 kMmioBase = 0xfffff800u;
constexpr u32 kMmioSize = 0x800;
// Highest expressible exclusive PMP limit for the device window; the window
// sits at the very top of the address space, so base + size would wrap.
constexpr u32 kMmioLimit = 0xfffffffcu;

// Register map, offsets from kMmioBase. The timer count register sits at
// offset 0 so a handler can read it with a single x0-relative load.
constexpr u32 kTimerCount = 0x00;   // RO, current countdown value
constexpr u32 kTimerReload = 0x04;  // RW, period in cycles
constexpr u32 kTimerCtrl = 0x08;    // RW, bit0 = enable
constexpr u32 kPulseLevel = 0x10;   // RW, output pin level
constexpr u32 kUartData = 0x20;     // RO, last received byte
constexpr u32 kUartStatus = 0x24;   // RO, bit0 = data ready
constexpr u32 kSensorValue = 0x30;  // RO, wait-stated peripheral register

constexpr u32 kIrqTimer = 16;
constexpr u32 kIrqUart = 17;
constexpr u32 kIrqTest0 = 20;
constexpr u32 kIrqTest1 = 21;
constexpr u32 kIrqTest2 = 22;

constexpr u64 kNoEvent = std::numeric_limits<u64>::max();

/// Auto-reloading decrementing timer. While enabled it fires exactly every
/// `period` cycles; the count register reads the value as of the cycle the
/// bus transfer completes, which is what the latency-probe arithmetic needs.
class ReloadTimer {
 public:
  void configure(u32 period, u64 now) {
    period_ = period;
    pending_reload_ = period;
    enabled_ = false;
    next_fire_ = kNoEvent;
    (void)now;
  }
  void enable(u64 now) {
    enabled_ = period_ != 0;
    next_fire_ = enabled_ ? now + period_ : kNoEvent;
    fired_ = 0;
  }
  bool enabled() const { return enabled_; }
  u32 period() const { return period_; }

  /// Earliest fire not yet consumed with on_fire().
  u64 next_fire() const { return next_fire_; }

  /// Consume the pending fire; a reload written mid-period takes effect
  /// here, so a handler re-arming the timer never perturbs the cadence of
  /// the period it runs in.
  void on_fire() {
    ++fired_;
    period_ = pending_reload_;
    next_fire_ += period_;
  }

  u32 count_at(u64 cycle) const {
    if (!enabled_) return 0;
    if (cycle <= next_fire_) return static_cast<u32>(next_fire_ - cycle);
    return period_ - static_cast<u32>((cycle - next_fire_) % period_);
  }

  void write_reload(u32 v) { pending_reload_ = v; }
  u64 fired() const { return fired_; }

  std::vector<u32>& count_reads() { return count_reads_; }

 private:
  u32 period_ = 0;
  u32 pending_reload_ = 0;
  bool enabled_ = false;
  u64 next_fire_ = kNoEvent;
  u64 fired_ = 0;
  std::vector<u32> count_reads_;
};

/// Output pin with an edge log: (completion cycle, level) per write.
class PulsePin {
 public:
  struct Edge {
    u64 cycle;
    u32 level;
  };
  void write(u32 level, u64 at) {
    level_ = level & 1;
    edges_.push_back({at, level_});
  }
  u32 level() const { return level_; }
  const std::vector<Edge>& edges() const { return edges_; }
  void clear() { edges_.clear(); }

 private:
  u32 level_ = 0;
  std::vector<Edge> edges_;
};

/// Byte source with one interrupt per byte. Byte k arrives at
/// start + floor(k * core_hz * bits_per_byte / baud), computed in integers
/// so the cadence is exact and reproducible.
class UartByteSource {
 public:
  void configure(u64 core_hz, u64 baud, u64 start, u64 byte_count) {
    hz_ = core_hz;
    baud_ = baud;
    start_ = start;
    total_ = byte_count;
    delivered_ = 0;
  }
  u64 byte_cycle(u64 k) const { return start_ + k * hz_ * 10 / baud_; }
  u64 cadence() const { return hz_ * 10 / baud_; }
  u64 next_fire() const {
    if (baud_ == 0 || delivered_ >= total_) return kNoEvent;
    return byte_cycle(delivered_);
  }
  void on_fire() {
    data_ = static_cast<u32>(delivered_ & 0xff);
    ready_ = true;
    ++delivered_;
  }
  u64 delivered() const { return delivered_; }
  u64 total() const { return total_; }
  u32 read_data() {
    ready_ = false;
    return data_;
  }
  bool ready() const { return ready_; }

 private:
  u64 hz_ = 0, baud_ = 0, start_ = 0, total_ = 0, delivered_ = 0;
  u32 data_ = 0;
  bool ready_ = false;
};

/// A polled peripheral register with configurable wait states; reads of it
/// are the slow instruction in the background workloads.
class SensorReg {
 public:
  void set_wait(u32 cycles) { wait_ = cycles; }
  u32 wait() const { return wait_; }
  u32 read(u64 at) const { return static_cast<u32>(at & 0xffff); }

 private:
  u32 wait_ = 6;
};

/// MMIO dispatcher for the whole device window.
class DeviceBlock : public MmioDevice {
 public:
  ReloadTimer timer;
  PulsePin pulse;
  UartByteSource uart;
  SensorReg sensor;

  u32 mmio_read(u32 offset, unsigned width, u64 at_cycle) override;
  void mmio_write(u32 offset, unsigned width, u32 value, u64 at_cycle) override;
  u32 extra_wait(u32 offset) const override {
    return offset == kSensorValue ? sensor.wait() : 0;
  }

  /// Earliest unconsumed device interrupt (fire cycle, irq number).
  struct Fire {
    u64 cycle = kNoEvent;
    u32 irq = 0;
  };
  Fire next_fire() const;
  void consume(u32 irq);
};

}  // namespace usim
