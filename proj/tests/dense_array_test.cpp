// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fixtures.hpp"
#include "moa/dense_array.hpp"
#include "moa/instrumentation.hpp"
#include "test_util.hpp"

namespace moa {
namespace {

using testing::kind_of;

TEST(DenseArray, ChecksLengthAndFiniteness) {
  EXPECT_EQ(kind_of([] { DenseArray(Shape{2, 2}, {1, 2, 3}); }), ErrorKind::kShape);
  EXPECT_EQ(kind_of([] { DenseArray(Shape{1}, {std::nan("")}); }), ErrorKind::kValue);
  EXPECT_EQ(kind_of([] { DenseArray(Shape{1}, {std::numeric_limits<double>::infinity()}); }),
            ErrorKind::kValue);
}

TEST(DenseArray, ScalarAndEmpty) {
  const DenseArray s = DenseArray::scalar(7.5);
  EXPECT_EQ(s.rank(), 0u);
  EXPECT_EQ(s.value(), 7.5);
  EXPECT_EQ(DenseArray().shape(), Shape{0});
  EXPECT_EQ(kind_of([] { fixtures::matrix_a().value(); }), ErrorKind::kShape);
}

TEST(DenseArray, FullIndexReadsOneElement) {
  const DenseArray b = fixtures::matrix_b();
  EXPECT_EQ(b.at(MultiIndex{0, 0}), 5);
  EXPECT_EQ(b.at(MultiIndex{2, 3}), 16);
  EXPECT_EQ(kind_of([&] { b.at(MultiIndex{3, 0}); }), ErrorKind::kIndex);
  EXPECT_EQ(kind_of([&] { b.flat(12); }), ErrorKind::kRange);
}

TEST(Psi, PartialIndexSelectsSubarray) {
  const DenseArray a = fixtures::planes_243();
  const DenseArray row = psi(MultiIndex{1, 2}, a);
  EXPECT_EQ(row, DenseArray(Shape{3}, {26, 27, 28}));
  const DenseArray plane = psi(MultiIndex{1}, a);
  EXPECT_EQ(plane.shape(), (Shape{4, 3}));
  EXPECT_EQ(plane.at(MultiIndex{0, 0}), 20);
  EXPECT_EQ(psi(MultiIndex{1, 2, 0}, a).value(), 26);
}

TEST(Psi, EmptyIndexIsIdentity) {
  const DenseArray a = fixtures::matrix_a();
  EXPECT_TRUE(psi(MultiIndex{}, a).shares_buffer_with(a));
}

TEST(Psi, OutOfBoundsIsAnIndexError) {
  EXPECT_EQ(kind_of([] { psi(MultiIndex{2}, fixtures::matrix_a()); }), ErrorKind::kIndex);
  EXPECT_EQ(kind_of([] { psi(MultiIndex{0, 0, 0}, fixtures::matrix_a()); }), ErrorKind::kIndex);
}

TEST(DenseArray, ReshapeAndFlattenShareStorage) {
  const DenseArray b = fixtures::matrix_b();
  instrumentation::reset();
  const DenseArray r = reshape(Shape{2, 6}, b);
  const DenseArray f = flatten(b);
  EXPECT_EQ(instrumentation::snapshot().array_allocations, 0u);
  EXPECT_TRUE(r.shares_buffer_with(b));
  EXPECT_TRUE(f.shares_buffer_with(b));
  EXPECT_EQ(f.shape(), Shape{12});
  EXPECT_EQ(r.at(MultiIndex{1, 0}), 11);
  EXPECT_EQ(kind_of([&] { reshape(Shape{5}, b); }), ErrorKind::kShape);
}

TEST(DenseArray, EqualityIsShapeAndData) {
  EXPECT_EQ(fixtures::matrix_a(), DenseArray(Shape{2, 2}, {1, 2, 3, 4}));
  EXPECT_NE(fixtures::matrix_a(), DenseArray(Shape{4}, {1, 2, 3, 4}));
  EXPECT_EQ(max_abs_diff(fixtures::matrix_a(), DenseArray(Shape{2, 2}, {1, 2, 3, 4.5})), 0.5);
}

TEST(DenseArray, AllocationsAreCounted) {
  instrumentation::reset();
  DenseArray::iota(Shape{3});
  DenseArray::scalar(1);
  EXPECT_EQ(instrumentation::snapshot().array_allocations, 2u);
}

TEST(Json, RoundTrip) {
  const DenseArray a(Shape{2, 2}, {1, -0.0, 0.1, 1e300});
  const std::string text = array_to_json(a);
  EXPECT_EQ(text, R"({"shape":[2,2],"data":[1,0,0.10000000000000001,1.0000000000000001e+300]})");
  EXPECT_EQ(array_from_json(text), a);
  EXPECT_EQ(array_to_json(DenseArray::scalar(3)), R"({"shape":[],"data":[3]})");
}

TEST(Json, MalformedInput) {
  EXPECT_EQ(kind_of([] { array_from_json("{"); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { array_from_json(R"({"shape":[2]})"); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { array_from_json(R"({"shape":[2.5],"data":[1]})"); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { array_from_json(R"({"shape":[2],"data":["x",1]})"); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { array_from_json(R"({"shape":[2,2],"data":[1,2,3]})"); }), ErrorKind::kShape);
}

TEST(Json, LoadFromFile) {
  const std::string path = ::testing::TempDir() + "moa_load_test.json";
  std::ofstream(path) << R"({"shape": [3], "data": [1, 2, 3]})";
  EXPECT_EQ(load_array(path), DenseArray(Shape{3}, {1, 2, 3}));
  std::remove(path.c_str());
  EXPECT_EQ(kind_of([&] { load_array(path); }), ErrorKind::kParse);
}

TEST(FormatScalar, SeventeenDigitsAndNoNegativeZero) {
  EXPECT_EQ(format_scalar(5), "5");
  EXPECT_EQ(format_scalar(-0.0), "0");
  EXPECT_EQ(format_scalar(1.0 / 3.0), "0.33333333333333331");
}

}  // namespace
}  // namespace moa
