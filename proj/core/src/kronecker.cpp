// SPDX-License-Identifier: Apache-2.0

#include "moa/kronecker.hpp"

#include "moa/error.hpp"

namespace moa {

namespace {

void require_matrix(const Shape& s, const char* side) {
  if (s.rank() != 2) {
    throw Error(ErrorKind::kShape, std::string("kron ") + side + " operand must be rank 2, got " +
                                       to_string(s));
  }
}

}  // namespace

Expr kron_desugar(Expr l, Expr r) {
  if (!l || !r) throw Error(ErrorKind::kShape, "kron: null operand");
  require_matrix(l->shape(), "left");
  require_matrix(r->shape(), "right");
  const Shape target{l->shape()[0] * r->shape()[0], l->shape()[1] * r->shape()[1]};
  return reshape(target, transpose(AxisPermutation{0, 2, 1, 3},
                                   outer(ScalarOp::kMul, std::move(l), std::move(r))));
}

double kron_entry(const MultiIndex& rc, const DenseArray& a, const DenseArray& b) {
  require_matrix(a.shape(), "left");
  require_matrix(b.shape(), "right");
  const Extent p = b.shape()[0];
  const Extent q = b.shape()[1];
  const Shape result{a.shape()[0] * p, a.shape()[1] * q};
  check_index(rc.components(), result);
  if (rc.size() != 2) throw Error(ErrorKind::kIndex, "kron entry needs a <row col> index");
  const Extent row = rc[0];
  const Extent col = rc[1];
  const double lhs = a.at(std::vector<Extent>{row / p, col / q});
  const double rhs = b.at(std::vector<Extent>{row % p, col % q});
  return lhs * rhs;
}

Expr multi_kron(const std::vector<Expr>& chain) {
  if (chain.size() < 2) {
    throw Error(ErrorKind::kShape, "multi_kron needs at least two operands, got " +
                                       std::to_string(chain.size()));
  }
  Expr acc = chain.front();
  for (std::size_t k = 1; k < chain.size(); ++k) acc = kron_desugar(acc, chain[k]);
  return acc;
}

}  // namespace moa
