// SPDX-License-Identifier: Apache-2.0

#include "moa/dyadics.hpp"

#include <cmath>

#include "moa/error.hpp"
#include "moa/expr.hpp"

namespace moa {

namespace {

void require_vector(const DenseArray& a, const char* what) {
  if (a.rank() != 1) {
    throw Error(ErrorKind::kShape, std::string(what) + " must be a vector, got shape " + to_string(a.shape()));
  }
}

double dot(const DenseArray& u, const DenseArray& v) {
  double s = 0.0;
  for (Extent k = 0; k < u.size(); ++k) s += u.data()[k] * v.data()[k];
  return s;
}

}  // namespace

DenseArray dyad(const DenseArray& u, const DenseArray& v) {
  require_vector(u, "dyad left operand");
  require_vector(v, "dyad right operand");
  const Expr e = outer(ScalarOp::kMul, leaf("u", u.shape()), leaf("v", v.shape()));
  return materialize(e, Environment{{"u", u}, {"v", v}});
}

DenseArray projector_parallel(const DenseArray& qhat) {
  require_vector(qhat, "projector direction");
  const double norm = std::sqrt(dot(qhat, qhat));
  if (std::abs(norm - 1.0) > kUnitTolerance) {
    throw Error(ErrorKind::kValue, "projector direction must be a unit vector, |q| = " + format_scalar(norm));
  }
  return dyad(qhat, qhat);
}

DenseArray spectral_reconstruct(const std::vector<double>& eigvals,
                                const std::vector<DenseArray>& eigvecs) {
  if (eigvals.size() != eigvecs.size() || eigvecs.empty()) {
    throw Error(ErrorKind::kShape, std::to_string(eigvals.size()) + " eigenvalues for " +
                                       std::to_string(eigvecs.size()) + " eigenvectors");
  }
  const Extent n = eigvecs.front().size();
  for (const auto& u : eigvecs) {
    require_vector(u, "eigenvector");
    if (u.size() != n) throw Error(ErrorKind::kShape, "eigenvectors differ in length");
  }
  for (std::size_t i = 0; i < eigvecs.size(); ++i) {
    for (std::size_t j = i; j < eigvecs.size(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      const double d = dot(eigvecs[i], eigvecs[j]);
      if (std::abs(d - expected) > kUnitTolerance) {
        throw Error(ErrorKind::kValue, "eigenvectors " + std::to_string(i) + " and " + std::to_string(j) +
                                           " are not orthonormal (dot = " + format_scalar(d) + ")");
      }
    }
  }
  std::vector<double> sum(static_cast<std::size_t>(n * n), 0.0);
  for (std::size_t j = 0; j < eigvecs.size(); ++j) {
    const DenseArray p = dyad(eigvecs[j], eigvecs[j]);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += eigvals[j] * p.data()[k];
  }
  return DenseArray(Shape{n, n}, std::move(sum));
}

}  // namespace moa
