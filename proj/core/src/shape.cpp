// SPDX-License-Identifier: Apache-2.0

#include "moa/shape.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "moa/error.hpp"

namespace moa {

namespace {

void require_non_negative(std::span<const Extent> v, const char* what) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0) {
      throw Error(ErrorKind::kShape, std::string(what) + " component " + std::to_string(k) +
                                         " is negative (" + std::to_string(v[k]) + ")");
    }
  }
}

}  // namespace

Shape::Shape(std::initializer_list<Extent> extents) : Shape(std::vector<Extent>(extents)) {}

Shape::Shape(std::vector<Extent> extents) : extents_(std::move(extents)) {
  require_non_negative(extents_, "shape");
}

Shape Shape::slice(std::size_t first, std::size_t last) const {
  last = std::min(last, extents_.size());
  first = std::min(first, last);
  return Shape(std::vector<Extent>(extents_.begin() + first, extents_.begin() + last));
}

MultiIndex::MultiIndex(std::initializer_list<Extent> components)
    : MultiIndex(std::vector<Extent>(components)) {}

MultiIndex::MultiIndex(std::vector<Extent> components) : components_(std::move(components)) {
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (components_[k] < 0) {
      throw Error(ErrorKind::kIndex, "index component " + std::to_string(k) + " is negative (" +
                                         std::to_string(components_[k]) + ")");
    }
  }
}

AxisPermutation::AxisPermutation(std::initializer_list<Extent> entries)
    : AxisPermutation(std::vector<Extent>(entries)) {}

AxisPermutation::AxisPermutation(std::vector<Extent> entries) : entries_(std::move(entries)) {
  const auto n = static_cast<Extent>(entries_.size());
  std::vector<bool> seen(entries_.size(), false);
  for (Extent e : entries_) {
    if (e < 0 || e >= n || seen[static_cast<std::size_t>(e)]) {
      throw Error(ErrorKind::kPermutation,
                  format_vector(entries_) + " is not a permutation of 0.." + std::to_string(n - 1));
    }
    seen[static_cast<std::size_t>(e)] = true;
  }
}

AxisPermutation AxisPermutation::identity(std::size_t n) {
  std::vector<Extent> e(n);
  std::iota(e.begin(), e.end(), Extent{0});
  return AxisPermutation(std::move(e));
}

AxisPermutation AxisPermutation::inverse() const { return AxisPermutation(gradeup(entries_)); }

Extent pi(const Shape& s) {
  Extent n = 1;
  for (Extent e : s) {
    if (__builtin_mul_overflow(n, e, &n)) {
      throw Error(ErrorKind::kOverflow, "element count of " + to_string(s) + " overflows 64 bits");
    }
  }
  return n;
}

Shape concat(const Shape& a, const Shape& b) {
  std::vector<Extent> e(a.vec());
  e.insert(e.end(), b.begin(), b.end());
  return Shape(std::move(e));
}

Shape permute_shape(const Shape& s, const AxisPermutation& t) {
  if (t.size() != s.rank()) {
    throw Error(ErrorKind::kPermutation, "permutation " + to_string(t) + " has length " +
                                             std::to_string(t.size()) + " but shape " +
                                             to_string(s) + " has rank " + std::to_string(s.rank()));
  }
  std::vector<Extent> e(s.rank());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = s[static_cast<std::size_t>(t[k])];
  return Shape(std::move(e));
}

std::vector<Extent> rowmajor_strides(const Shape& s) {
  std::vector<Extent> strides(s.rank());
  Extent acc = 1;
  for (std::size_t k = s.rank(); k-- > 0;) {
    strides[k] = acc;
    acc *= s[k];
  }
  return strides;
}

bool index_valid(std::span<const Extent> i, const Shape& s) {
  if (i.size() > s.rank()) return false;
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (i[k] < 0 || i[k] >= s[k]) return false;
  }
  return true;
}

void check_index(std::span<const Extent> i, const Shape& s) {
  if (i.size() > s.rank()) {
    throw Error(ErrorKind::kIndex, "index " + format_vector(i) + " has length " +
                                       std::to_string(i.size()) + " but shape " + to_string(s) +
                                       " has rank " + std::to_string(s.rank()));
  }
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (i[k] < 0 || i[k] >= s[k]) {
      throw Error(ErrorKind::kIndex, "index " + format_vector(i) + " out of bounds on axis " +
                                         std::to_string(k) + " (extent " + std::to_string(s[k]) +
                                         ")");
    }
  }
}

Extent ravel_rowmajor(std::span<const Extent> i, const Shape& s) {
  check_index(i, s);
  if (i.size() != s.rank()) {
    throw Error(ErrorKind::kIndex, "ravel needs a full index: got length " +
                                       std::to_string(i.size()) + " for shape " + to_string(s));
  }
  Extent offset = 0;
  for (std::size_t k = 0; k < i.size(); ++k) offset = offset * s[k] + i[k];
  return offset;
}

MultiIndex unravel_rowmajor(Extent offset, const Shape& s) {
  const Extent n = pi(s);
  if (offset < 0 || offset >= n) {
    throw Error(ErrorKind::kRange, "offset " + std::to_string(offset) + " outside [0, " +
                                       std::to_string(n) + ") for shape " + to_string(s));
  }
  std::vector<Extent> i(s.rank());
  for (std::size_t k = s.rank(); k-- > 0;) {
    i[k] = offset % s[k];
    offset /= s[k];
  }
  return MultiIndex(std::move(i));
}

std::vector<Extent> gradeup(std::span<const Extent> v) {
  const auto n = static_cast<Extent>(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0 || v[k] >= n) {
      throw Error(ErrorKind::kDomain, "gradeup entry " + std::to_string(v[k]) + " at position " +
                                          std::to_string(k) + " outside [0, " + std::to_string(n) +
                                          ")");
    }
  }
  std::vector<Extent> r(v.size());
  std::iota(r.begin(), r.end(), Extent{0});
  std::stable_sort(r.begin(), r.end(), [&](Extent a, Extent b) {
    return v[static_cast<std::size_t>(a)] < v[static_cast<std::size_t>(b)];
  });
  return r;
}

bool next_index(std::vector<Extent>& i, const Shape& s) {
  for (std::size_t k = i.size(); k-- > 0;) {
    if (++i[k] < s[k]) return true;
    i[k] = 0;
  }
  return false;
}

std::string format_vector(std::span<const Extent> v) {
  std::ostringstream os;
  os << '<';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? " " : "") << v[k];
  os << '>';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Shape& s) { return os << to_string(s); }
std::ostream& operator<<(std::ostream& os, const MultiIndex& i) { return os << to_string(i); }
std::ostream& operator<<(std::ostream& os, const AxisPermutation& t) { return os << to_string(t); }

}  // namespace moa
