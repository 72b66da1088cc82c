// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>

namespace moa::instrumentation {

/// Process-wide counters used to check that element evaluation reads leaves
/// directly and never builds temporary arrays.
struct Snapshot {
  std::uint64_t scalar_reads = 0;      // leaf element reads during evaluation
  std::uint64_t array_allocations = 0; // DenseArray buffers created
};

void reset();
Snapshot snapshot();

void count_scalar_read();
void count_array_allocation();

}  // namespace moa::instrumentation
