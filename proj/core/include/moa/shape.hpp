// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace moa {

using Extent = std::int64_t;

/// Axis extents of an array, the value returned by rho. An empty shape is
/// the shape of a scalar. Zero extents are legal; such arrays hold no
/// elements and cannot be indexed.
class Shape {
 public:
  Shape() = default;
  Shape(std::initializer_list<Extent> extents);
  explicit Shape(std::vector<Extent> extents);

  std::size_t rank() const noexcept { return extents_.size(); }
  bool empty() const noexcept { return extents_.empty(); }
  Extent operator[](std::size_t axis) const { return extents_[axis]; }
  std::span<const Extent> extents() const noexcept { return extents_; }
  const std::vector<Extent>& vec() const noexcept { return extents_; }

  auto begin() const noexcept { return extents_.begin(); }
  auto end() const noexcept { return extents_.end(); }

  /// Extents [first, last).
  Shape slice(std::size_t first, std::size_t last) const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<Extent> extents_;
};

/// A full or partial index vector.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<Extent> components);
  explicit MultiIndex(std::vector<Extent> components);

  std::size_t size() const noexcept { return components_.size(); }
  bool empty() const noexcept { return components_.empty(); }
  Extent operator[](std::size_t k) const { return components_[k]; }
  std::span<const Extent> components() const noexcept { return components_; }
  const std::vector<Extent>& vec() const noexcept { return components_; }

  auto begin() const noexcept { return components_.begin(); }
  auto end() const noexcept { return components_.end(); }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<Extent> components_;
};

/// A true permutation of 0..n-1 (no repeats).
class AxisPermutation {
 public:
  AxisPermutation() = default;
  AxisPermutation(std::initializer_list<Extent> entries);
  explicit AxisPermutation(std::vector<Extent> entries);

  static AxisPermutation identity(std::size_t n);

  std::size_t size() const noexcept { return entries_.size(); }
  Extent operator[](std::size_t k) const { return entries_[k]; }
  std::span<const Extent> entries() const noexcept { return entries_; }
  const std::vector<Extent>& vec() const noexcept { return entries_; }

  /// gradeup of a permutation, i.e. its inverse.
  AxisPermutation inverse() const;

  friend bool operator==(const AxisPermutation&, const AxisPermutation&) = default;

 private:
  std::vector<Extent> entries_;
};

/// Element count: product of extents, 1 for the empty shape. Throws
/// kOverflow instead of wrapping.
Extent pi(const Shape& s);

Shape concat(const Shape& a, const Shape& b);

/// s[t]: extents of `s` selected by the permutation `t`.
Shape permute_shape(const Shape& s, const AxisPermutation& t);

/// Row-major strides: stride[k] = product of s[j] for j > k.
std::vector<Extent> rowmajor_strides(const Shape& s);

/// Whether `i` is a valid (possibly partial) index into `s`.
bool index_valid(std::span<const Extent> i, const Shape& s);

/// Throws kIndex naming the offending axis when `i` is not a valid prefix
/// index for `s`.
void check_index(std::span<const Extent> i, const Shape& s);

/// Flat row-major offset of a full index.
Extent ravel_rowmajor(std::span<const Extent> i, const Shape& s);
inline Extent ravel_rowmajor(const MultiIndex& i, const Shape& s) {
  return ravel_rowmajor(i.components(), s);
}

MultiIndex unravel_rowmajor(Extent offset, const Shape& s);

/// Positions of the entries of `v` from lowest to highest. Ties keep their
/// original order. Entries must lie in [0, n) where n = v.size(); repeats
/// are allowed.
std::vector<Extent> gradeup(std::span<const Extent> v);

/// Advances `i` through `s` in row-major order. Returns false once the
/// last index has been passed (and leaves `i` all zeros).
bool next_index(std::vector<Extent>& i, const Shape& s);

/// `<e0 e1 ...>`
std::string format_vector(std::span<const Extent> v);
inline std::string to_string(const Shape& s) { return format_vector(s.extents()); }
inline std::string to_string(const MultiIndex& i) { return format_vector(i.components()); }
inline std::string to_string(const AxisPermutation& t) { return format_vector(t.entries()); }

std::ostream& operator<<(std::ostream& os, const Shape& s);
std::ostream& operator<<(std::ostream& os, const MultiIndex& i);
std::ostream& operator<<(std::ostream& os, const AxisPermutation& t);

}  // namespace moa
