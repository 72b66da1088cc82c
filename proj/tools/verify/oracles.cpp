// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "moa/error.hpp"
#include "moa/permute.hpp"

namespace moa::oracle {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("MOA_SEED"); s && *s) return std::stoull(s);
  return fallback;
}

DenseArray outer_product(ScalarOp op, const DenseArray& a, const DenseArray& b) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(a.size() * b.size()));
  for (double x : a.data()) {
    for (double y : b.data()) out.push_back(apply(op, x, y));
  }
  return DenseArray(concat(a.shape(), b.shape()), std::move(out));
}

DenseArray kron_blocks(const DenseArray& a, const DenseArray& b) {
  const Extent m = a.shape()[0], n = a.shape()[1];
  const Extent p = b.shape()[0], q = b.shape()[1];
  std::vector<std::vector<double>> grid(static_cast<std::size_t>(m * p),
                                        std::vector<double>(static_cast<std::size_t>(n * q)));
  for (Extent i = 0; i < m; ++i) {
    for (Extent j = 0; j < n; ++j) {
      const double aij = a.data()[i * n + j];
      for (Extent k = 0; k < p; ++k) {
        for (Extent l = 0; l < q; ++l) {
          grid[i * p + k][j * q + l] = aij * b.data()[k * q + l];
        }
      }
    }
  }
  std::vector<double> out;
  for (const auto& row : grid) out.insert(out.end(), row.begin(), row.end());
  return DenseArray(Shape{m * p, n * q}, std::move(out));
}

DenseArray step_materialize(const Expr& e, const Environment& env) {
  return std::visit(
      [&](const auto& n) -> DenseArray {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LeafNode>) {
          auto it = env.find(n.id);
          if (it == env.end()) throw Error(ErrorKind::kEval, "unbound array '" + n.id + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, OuterNode>) {
          return outer_product(n.op, step_materialize(n.left, env), step_materialize(n.right, env));
        } else if constexpr (std::is_same_v<T, TransposeNode>) {
          return transpose_general(n.perm, step_materialize(n.child, env));
        } else if constexpr (std::is_same_v<T, ReshapeNode>) {
          return reshape(e->shape(), step_materialize(n.child, env));
        } else {
          return kron_blocks(step_materialize(n.left, env), step_materialize(n.right, env));
        }
      },
      e->payload());
}

DenseArray matmul(const DenseArray& a, const DenseArray& b) {
  const Extent m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) throw Error(ErrorKind::kShape, "matmul inner dimensions differ");
  std::vector<double> out(static_cast<std::size_t>(m * n), 0.0);
  for (Extent i = 0; i < m; ++i) {
    for (Extent j = 0; j < n; ++j) {
      double s = 0.0;
      for (Extent t = 0; t < k; ++t) s += a.data()[i * k + t] * b.data()[t * n + j];
      out[static_cast<std::size_t>(i * n + j)] = s;
    }
  }
  return DenseArray(Shape{m, n}, std::move(out));
}

DenseArray identity(Extent n) {
  std::vector<double> out(static_cast<std::size_t>(n * n), 0.0);
  for (Extent i = 0; i < n; ++i) out[static_cast<std::size_t>(i * n + i)] = 1.0;
  return DenseArray(Shape{n, n}, std::move(out));
}

DenseArray subtract(const DenseArray& a, const DenseArray& b) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= b.data()[k];
  return DenseArray(a.shape(), std::move(out));
}

double max_abs(const DenseArray& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

EigenPairs jacobi_eigen(const DenseArray& symmetric) {
  const auto n = static_cast<std::size_t>(symmetric.shape()[0]);
  std::vector<double> a(symmetric.data().begin(), symmetric.data().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  EigenPairs out;
  for (std::size_t j = 0; j < n; ++j) {
    out.values.push_back(A(j, j));
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = V(k, j);
    out.vectors.emplace_back(Shape{static_cast<Extent>(n)}, std::move(col));
  }
  return out;
}

DenseArray random_int_array(const Shape& s, Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<double> data(static_cast<std::size_t>(pi(s)));
  for (auto& d : data) d = dist(rng);
  return DenseArray(s, std::move(data));
}

DenseArray random_unit_vector(Extent n, Rng& rng) {
  std::normal_distribution<double> dist;
  std::vector<double> v(static_cast<std::size_t>(n));
  double norm = 0.0;
  while (norm < 1e-3) {
    norm = 0.0;
    for (auto& x : v) {
      x = dist(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
  }
  for (auto& x : v) x /= norm;
  return DenseArray(Shape{n}, std::move(v));
}

DenseArray random_symmetric(Extent n, Rng& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (Extent i = 0; i < n; ++i) {
    for (Extent j = i; j < n; ++j) {
      const double x = dist(rng);
      a[static_cast<std::size_t>(i * n + j)] = x;
      a[static_cast<std::size_t>(j * n + i)] = x;
    }
  }
  return DenseArray(Shape{n, n}, std::move(a));
}

}  // namespace moa::oracle
