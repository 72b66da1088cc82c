// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moa/shape.hpp"

namespace moa {

/// Immutable row-major array of doubles. The buffer is shared between
/// copies, so copying, flatten and reshape never move data. A rank-0 array
/// is the scalar representation.
class DenseArray {
 public:
  /// Empty vector: shape <0>.
  DenseArray();

  /// Throws kShape if data.size() != pi(shape) and kValue on NaN/Inf.
  DenseArray(Shape shape, std::vector<double> data);

  static DenseArray scalar(double value);

  /// Elements 0, 1, 2, ... in row-major order.
  static DenseArray iota(Shape shape, double start = 0.0);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.rank(); }
  Extent size() const noexcept { return static_cast<Extent>(data_->size()); }
  std::span<const double> data() const noexcept { return *data_; }

  /// Element at a full index.
  double at(std::span<const Extent> index) const;
  double at(const MultiIndex& index) const { return at(index.components()); }
  double flat(Extent offset) const;

  /// Value of a rank-0 array.
  double value() const;

  /// True when both arrays share one buffer.
  bool shares_buffer_with(const DenseArray& other) const noexcept { return data_ == other.data_; }

  friend bool operator==(const DenseArray& a, const DenseArray& b);

 private:
  struct Share {};
  DenseArray(Share, Shape shape, std::shared_ptr<const std::vector<double>> data);

  friend DenseArray reshape(const Shape& s, const DenseArray& a);
  friend DenseArray flatten(const DenseArray& a);

  Shape shape_;
  std::shared_ptr<const std::vector<double>> data_;
};

/// i psi a. A full index yields a rank-0 array, a partial index of length k
/// yields the row-major slab with the first k axes dropped (copied), and the
/// empty index yields `a` itself.
DenseArray psi(const MultiIndex& i, const DenseArray& a);

/// Shape <pi(a.shape)>; same buffer.
DenseArray flatten(const DenseArray& a);

/// Throws kShape unless pi(s) == pi(a.shape). Same buffer.
DenseArray reshape(const Shape& s, const DenseArray& a);

/// Largest |a - b| over matching elements; throws kShape on shape mismatch.
double max_abs_diff(const DenseArray& a, const DenseArray& b);

/// Formats with 17 significant digits (%.17g).
std::string format_scalar(double v);

/// {"shape":[...],"data":[...]} with 17 significant digits.
std::string array_to_json(const DenseArray& a);

/// Parses {"shape":[...],"data":[...]}; throws kParse on malformed input and
/// kShape when data length does not match the shape.
DenseArray array_from_json(std::string_view text);

DenseArray load_array(const std::string& path);

}  // namespace moa
