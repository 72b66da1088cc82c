// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "moa/dense_array.hpp"

namespace moa::fixtures {

/// [[1 2] [3 4]]
inline DenseArray matrix_a() { return DenseArray(Shape{2, 2}, {1, 2, 3, 4}); }

/// [[5 6 7 8] [9 10 11 12] [13 14 15 16]]
inline DenseArray matrix_b() { return DenseArray::iota(Shape{3, 4}, 5.0); }

/// Shape <2 4 3>: the first plane holds 0..11, the second 20..31.
inline DenseArray planes_243() {
  std::vector<double> d;
  for (int k = 0; k < 12; ++k) d.push_back(k);
  for (int k = 0; k < 12; ++k) d.push_back(20 + k);
  return DenseArray(Shape{2, 4, 3}, std::move(d));
}

}  // namespace moa::fixtures
