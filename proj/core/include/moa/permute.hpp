// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "moa/dense_array.hpp"

namespace moa {

/// A^{T_t}, materialized. The result has shape a.shape[t] and
///   i psi result = i[gradeup(t)] psi a.
/// Throws kPermutation when t.size() != a.rank().
DenseArray transpose_general(const AxisPermutation& t, const DenseArray& a);

/// Matrix transpose; throws kShape unless a is rank 2.
DenseArray transpose_matrix(const DenseArray& a);

}  // namespace moa
