// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "moa/dense_array.hpp"
#include "moa/expr.hpp"

namespace moa {

/// The Kronecker product of an m x n and a p x q operand, expressed as
///   reshape(<m*p n*q>, transpose(<0 2 1 3>, outer(mul, l, r))).
/// Throws kShape if either operand is not rank 2.
Expr kron_desugar(Expr l, Expr r);

/// (a (x) b)[R, C] = a[i, j] * b[l, m] with R = i*p + l and C = j*q + m,
/// the composite-index definition. Throws kShape for non-matrices and
/// kIndex for out-of-range R or C.
double kron_entry(const MultiIndex& rc, const DenseArray& a, const DenseArray& b);

/// Left fold of kron_desugar over the chain: ((c0 (x) c1) (x) c2) ...
/// Requires at least two operands.
Expr multi_kron(const std::vector<Expr>& chain);

}  // namespace moa
