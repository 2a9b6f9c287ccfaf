// Copyright (c) 2026 uintrsim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "core/devices.hpp"

namespace usim {

u32 DeviceBlock::mmio_read(u32 offset, unsigned /*width*/, u64 at_cycle) {
  switch (offset) {
    case kTimerCount: {
      const u32 v = timer.count_at(at_cycle);
      timer.count_reads().push_back(v);
      return v;
    }
    case kTimerReload: return timer.period();
    case kTimerCtrl: return timer.enabled() ? 1 : 0;
    case kPulseLevel: return pulse.level();
    case kUartData: return uart.read_data();
    case kUartStatus: return uart.ready() ? 1 : 0;
    case kSensorValue: return sensor.read(at_cycle);
    default: return 0;
  }
}

void DeviceBlock::mmio_write(u32 offset, unsigned /*width*/, u32 value,
                             u64 at_cycle) {
  switch (offset) {
    case kTimerReload: timer.write_reload(value); break;
    case kTimerCtrl:
      if (value & 1) timer.enable(at_cycle);
      break;
    case kPulseLevel: pulse.write(value, at_cycle); break;
    default: break;
  }
}

DeviceBlock::Fire DeviceBlock::next_fire() const {
  Fire f;
  const u64 t = timer.next_fire();
  if (t < f.cycle) f = {t, kIrqTimer};
  const u64 ub = uart.next_fire();
  if (ub < f.cycle) f = {ub, kIrqUart};
  return f;
}

void DeviceBlock::consume(u32 irq) {
  if (irq == kIrqTimer) timer.on_fire();
  else if (irq == kIrqUart) uart.on_fire();
}

}  // namespace usim
