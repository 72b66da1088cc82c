// SPDX-License-Identifier: Apache-2.0

#include "moa/permute.hpp"

#include "moa/error.hpp"

namespace moa {

DenseArray transpose_general(const AxisPermutation& t, const DenseArray& a) {
  const Shape out_shape = permute_shape(a.shape(), t);
  const std::vector<Extent> g = gradeup(t.entries());
  const std::vector<Extent> src_strides = rowmajor_strides(a.shape());

  // Source component b is i[g[b]], so result axis g[b] advances the source by src_strides[b].
  std::vector<Extent> stride_by_out_axis(out_shape.rank());
  for (std::size_t b = 0; b < g.size(); ++b) {
    stride_by_out_axis[static_cast<std::size_t>(g[b])] = src_strides[b];
  }

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(pi(out_shape)));
  if (pi(out_shape) > 0) {
    std::vector<Extent> i(out_shape.rank(), 0);
    do {
      Extent src = 0;
      for (std::size_t k = 0; k < i.size(); ++k) src += i[k] * stride_by_out_axis[k];
      out.push_back(a.data()[static_cast<std::size_t>(src)]);
    } while (next_index(i, out_shape));
  }
  return DenseArray(out_shape, std::move(out));
}

DenseArray transpose_matrix(const DenseArray& a) {
  if (a.rank() != 2) {
    throw Error(ErrorKind::kShape,
                "matrix transpose needs rank 2, got shape " + to_string(a.shape()));
  }
  return transpose_general(AxisPermutation{1, 0}, a);
}

}  // namespace moa
