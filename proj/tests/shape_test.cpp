// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <limits>
#include <sstream>

#include "moa/shape.hpp"
#include "test_util.hpp"

namespace moa {
namespace {

using testing::kind_of;

TEST(Shape, RejectsNegativeExtents) {
  EXPECT_EQ(kind_of([] { Shape{2, -1}; }), ErrorKind::kShape);
  EXPECT_EQ(Shape{}.rank(), 0u);
}

TEST(Shape, PiIsProductAndOneForScalars) {
  EXPECT_EQ(pi(Shape{2, 2, 3, 4}), 48);
  EXPECT_EQ(pi(Shape{}), 1);
  EXPECT_EQ(pi(Shape{3, 0, 5}), 0);
}

TEST(Shape, PiOverflowIsAnError) {
  const Extent big = std::numeric_limits<Extent>::max() / 2;
  EXPECT_EQ(kind_of([&] { pi(Shape{big, 3}); }), ErrorKind::kOverflow);
}

TEST(Shape, ConcatAndSlice) {
  EXPECT_EQ(concat(Shape{2, 2}, Shape{3, 4}), (Shape{2, 2, 3, 4}));
  EXPECT_EQ(concat(Shape{}, Shape{5}), Shape{5});
  EXPECT_EQ((Shape{2, 4, 3}).slice(1, 3), (Shape{4, 3}));
}

TEST(Shape, RowMajorStrides) {
  EXPECT_EQ(rowmajor_strides(Shape{2, 4, 3}), (std::vector<Extent>{12, 3, 1}));
  EXPECT_TRUE(rowmajor_strides(Shape{}).empty());
}

TEST(Shape, RavelAndUnravelAreInverse) {
  const Shape s{2, 4, 3};
  for (Extent k = 0; k < pi(s); ++k) EXPECT_EQ(ravel_rowmajor(unravel_rowmajor(k, s), s), k);
  EXPECT_EQ(ravel_rowmajor(MultiIndex{1, 2, 0}, s), 18);
  EXPECT_EQ(unravel_rowmajor(0, Shape{}), MultiIndex{});
}

TEST(Shape, RavelErrors) {
  EXPECT_EQ(kind_of([] { ravel_rowmajor(MultiIndex{1}, Shape{2, 2}); }), ErrorKind::kIndex);
  EXPECT_EQ(kind_of([] { ravel_rowmajor(MultiIndex{2, 0}, Shape{2, 2}); }), ErrorKind::kIndex);
  EXPECT_EQ(kind_of([] { unravel_rowmajor(4, Shape{2, 2}); }), ErrorKind::kRange);
  EXPECT_EQ(kind_of([] { unravel_rowmajor(-1, Shape{2, 2}); }), ErrorKind::kRange);
}

TEST(Shape, IndexValidity) {
  const std::vector<Extent> partial{1};
  const std::vector<Extent> bad{1, 3};
  EXPECT_TRUE(index_valid(partial, Shape{2, 3}));
  EXPECT_FALSE(index_valid(bad, Shape{2, 3}));
  EXPECT_EQ(kind_of([&] { check_index(bad, Shape{2, 3}); }), ErrorKind::kIndex);
  EXPECT_EQ(kind_of([] { MultiIndex{0, -1}; }), ErrorKind::kIndex);
}

TEST(Permutation, ValidatesEntries) {
  EXPECT_EQ(kind_of([] { AxisPermutation{0, 0}; }), ErrorKind::kPermutation);
  EXPECT_EQ(kind_of([] { AxisPermutation{0, 2}; }), ErrorKind::kPermutation);
  EXPECT_EQ(AxisPermutation::identity(3), (AxisPermutation{0, 1, 2}));
  EXPECT_EQ((AxisPermutation{2, 0, 1}).inverse(), (AxisPermutation{1, 2, 0}));
}

TEST(Permutation, PermuteShape) {
  EXPECT_EQ(permute_shape(Shape{2, 4, 3}, AxisPermutation{2, 0, 1}), (Shape{3, 2, 4}));
  EXPECT_EQ(kind_of([] { permute_shape(Shape{2, 4}, AxisPermutation{2, 0, 1}); }), ErrorKind::kPermutation);
}

TEST(Gradeup, SortsPositionsStably) {
  EXPECT_EQ(gradeup(std::vector<Extent>{2, 0, 1, 3}), (std::vector<Extent>{1, 2, 0, 3}));
  EXPECT_EQ(gradeup(std::vector<Extent>{1, 0, 1, 0}), (std::vector<Extent>{1, 3, 0, 2}));
  EXPECT_TRUE(gradeup(std::vector<Extent>{}).empty());
}

TEST(Gradeup, RejectsEntriesOutsideDomain) {
  EXPECT_EQ(kind_of([] { gradeup(std::vector<Extent>{0, 3}); }), ErrorKind::kDomain);
  EXPECT_EQ(kind_of([] { gradeup(std::vector<Extent>{-1, 0}); }), ErrorKind::kDomain);
}

TEST(Shape, NextIndexWalksRowMajor) {
  std::vector<Extent> i{0, 0};
  std::vector<std::vector<Extent>> seen{i};
  while (next_index(i, Shape{2, 3})) seen.push_back(i);
  ASSERT_EQ(seen.size(), 6u);
  EXPECT_EQ(seen[3], (std::vector<Extent>{1, 0}));
}

TEST(Shape, Formatting) {
  std::ostringstream os;
  os << Shape{2, 2, 3, 4};
  EXPECT_EQ(os.str(), "<2 2 3 4>");
  EXPECT_EQ(to_string(Shape{}), "<>");
}

}  // namespace
}  // namespace moa
