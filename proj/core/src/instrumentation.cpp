// SPDX-License-Identifier: Apache-2.0

#include "moa/instrumentation.hpp"

namespace moa::instrumentation {

namespace {
std::atomic<std::uint64_t> g_scalar_reads{0};
std::atomic<std::uint64_t> g_array_allocations{0};
}  // namespace

void reset() {
  g_scalar_reads.store(0, std::memory_order_relaxed);
  g_array_allocations.store(0, std::memory_order_relaxed);
}

Snapshot snapshot() {
  return {g_scalar_reads.load(std::memory_order_relaxed),
          g_array_allocations.load(std::memory_order_relaxed)};
}

void count_scalar_read() { g_scalar_reads.fetch_add(1, std::memory_order_relaxed); }
void count_array_allocation() { g_array_allocations.fetch_add(1, std::memory_order_relaxed); }

}  // namespace moa::instrumentation
