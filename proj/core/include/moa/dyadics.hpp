// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "moa/dense_array.hpp"

namespace moa {

inline constexpr double kUnitTolerance = 1e-12;

/// u (x) v as a matrix: M[i, j] = u[i] * v[j]. Built as the outer product of
/// two vector leaves. Throws kShape unless both are rank 1.
DenseArray dyad(const DenseArray& u, const DenseArray& v);

/// qhat (x) qhat. Throws kValue unless |qhat| is 1 within kUnitTolerance.
DenseArray projector_parallel(const DenseArray& qhat);

/// sum_j eigvals[j] * (u_j (x) u_j). Throws kShape on length mismatch and
/// kValue unless the vectors are orthonormal within kUnitTolerance.
DenseArray spectral_reconstruct(const std::vector<double>& eigvals,
                                const std::vector<DenseArray>& eigvecs);

}  // namespace moa
