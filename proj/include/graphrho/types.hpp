#pragma once

#include <cstdint>

namespace graphrho {

// Flat operation index within one Instance (row-major over jobs).
using OpId = int32_t;
using JobId = int32_t;
using MachineId = int32_t;

// Integer time units everywhere; no fractional starts or durations.
using Time = int64_t;

}  // namespace graphrho
