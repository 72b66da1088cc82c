// SPDX-License-Identifier: Apache-2.0

// Reference implementations used to check the library. Each one computes its
// answer by the most direct route available (explicit temporaries, classical
// block layout, plain loops) and never goes through index rewriting or loop
// plans.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "moa/dense_array.hpp"
#include "moa/expr.hpp"

namespace moa::oracle {

using Rng = std::mt19937_64;

/// MOA_SEED from the environment, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback = 20240601);

/// Explicit outer product: result[i ++ j] = op(a[i], b[j]).
DenseArray outer_product(ScalarOp op, const DenseArray& a, const DenseArray& b);

/// Classical Kronecker layout: block (i, j) of the result is a[i, j] * b.
DenseArray kron_blocks(const DenseArray& a, const DenseArray& b);

/// Materializes every node of `e` as its own temporary array, bottom-up.
DenseArray step_materialize(const Expr& e, const Environment& env);

DenseArray matmul(const DenseArray& a, const DenseArray& b);
DenseArray identity(Extent n);
DenseArray subtract(const DenseArray& a, const DenseArray& b);
double max_abs(const DenseArray& a);

struct EigenPairs {
  std::vector<double> values;
  std::vector<DenseArray> vectors;
};

/// Cyclic Jacobi rotations on a real symmetric matrix.
EigenPairs jacobi_eigen(const DenseArray& symmetric);

DenseArray random_int_array(const Shape& s, Rng& rng, int lo = 1, int hi = 9);
DenseArray random_unit_vector(Extent n, Rng& rng);
DenseArray random_symmetric(Extent n, Rng& rng);

}  // namespace moa::oracle
