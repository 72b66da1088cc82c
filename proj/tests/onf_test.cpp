// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "moa/onf.hpp"
#include "test_util.hpp"

namespace moa {
namespace {

using testing::kind_of;

Expr aba() {
  const Expr a = leaf("A", Shape{2, 2});
  return outer(ScalarOp::kMul, outer(ScalarOp::kMul, a, leaf("B", Shape{3, 3})), a);
}

Environment aba_env() { return {{"A", fixtures::matrix_a()}, {"B", DenseArray::iota(Shape{3, 3}, 1)}}; }

TEST(Onf, BufferNames) {
  EXPECT_EQ(buffer_id_for("A"), "avec");
  EXPECT_EQ(buffer_id_for("Bt"), "btvec");
  const Environment env = aba_env();
  const BufferSet b = flatten_operands(env);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[1].id, "bvec");
  EXPECT_EQ(b[1].source, "B");
  EXPECT_EQ(b[1].data.shape(), Shape{9});
  EXPECT_TRUE(b[1].data.shares_buffer_with(env.at("B")));
}

TEST(Onf, FourProcessorPlanForAba) {
  const LoopPlan plan = lower(aba(), 4);
  ASSERT_EQ(plan.loops.size(), 3u);
  EXPECT_EQ(plan.loops[0], (LoopSpec{"p", 0, 4, 1, 4}));
  EXPECT_EQ(plan.loops[1], (LoopSpec{"q", 0, 9, 1, 9}));
  EXPECT_EQ(plan.loops[2], (LoopSpec{"r", 0, 4, 1, 4}));
  EXPECT_EQ(body_to_string(plan), "out[36*p + 4*q + r] = (avec[p] * bvec[q]) * avec[r]");
  EXPECT_EQ(plan.body.write_offset, (AffineExpr{{{"p", 36}, {"q", 4}, {"r", 1}}, 0}));
  EXPECT_TRUE(plan.has_processor_loop());

  const DenseArray out = execute_plan(plan, flatten_operands(aba_env()));
  EXPECT_EQ(out.size(), 144);
  EXPECT_EQ(out, materialize(aba(), aba_env()));
  EXPECT_EQ(out.at(MultiIndex{1, 0, 2, 1, 1, 0}), 72);
}

TEST(Onf, SingleProcessorUsesPlainLoopNames) {
  const LoopPlan plan = lower(aba(), 1);
  EXPECT_FALSE(plan.has_processor_loop());
  EXPECT_EQ(body_to_string(plan), "out[36*i + 4*j + k] = (avec[i] * bvec[j]) * avec[k]");
  const LoopPlan copy = lower(leaf("A", Shape{2, 2}), 1);
  ASSERT_EQ(copy.loops.size(), 1u);
  EXPECT_EQ(copy.loops[0], (LoopSpec{"i", 0, 4, 1, 4}));
}

TEST(Onf, ReshapeAlongSharedBoundariesLowers) {
  // 6 splits into 2 x 3, so every atom maps onto whole axes of the <4 3> child.
  const Expr e = reshape(Shape{2, 6}, transpose(AxisPermutation{1, 0}, leaf("B", Shape{3, 4})));
  const LoopPlan plan = lower(e, 1);
  EXPECT_EQ(body_to_string(plan), "out[3*i + j] = bvec[i + 4*j]");
  const Environment env{{"B", fixtures::matrix_b()}};
  EXPECT_EQ(execute_plan(plan, flatten_operands(env)), materialize(e, env));
}

TEST(Onf, TransposedReadsAreStrided) {
  const Expr e = transpose(AxisPermutation{1, 0}, leaf("B", Shape{3, 4}));
  const LoopPlan plan = lower(e, 1);
  EXPECT_EQ(body_to_string(plan), "out[3*i + j] = bvec[i + 4*j]");
  const Environment env{{"B", fixtures::matrix_b()}};
  EXPECT_EQ(execute_plan(plan, flatten_operands(env)), materialize(e, env));
}

TEST(Onf, KronSplitsAtomsByFactor) {
  const Expr e = kron(leaf("A", Shape{2, 2}), leaf("B", Shape{3, 4}));
  const LoopPlan plan = lower(e, 2);
  EXPECT_EQ(body_to_string(plan), "out[24*p + 8*q + 4*r + s] = avec[2*p + r] * bvec[4*q + s]");
  const Environment env{{"A", fixtures::matrix_a()}, {"B", fixtures::matrix_b()}};
  EXPECT_EQ(execute_plan(plan, flatten_operands(env), Execution::kParallel), materialize(e, env));
}

TEST(Onf, ScalarOutputGetsOneIteration) {
  const Environment env{{"s", DenseArray::scalar(2)}};
  const Expr s = leaf("s", Shape{});
  const LoopPlan plan = lower(outer(ScalarOp::kAdd, s, s), 1);
  ASSERT_EQ(plan.loops.size(), 1u);
  EXPECT_EQ(plan.loops[0].count, 1);
  EXPECT_EQ(execute_plan(plan, flatten_operands(env)), DenseArray::scalar(4));
}

TEST(Onf, ValidProcessorCounts) {
  EXPECT_EQ(valid_proc_counts(aba()), (std::vector<Extent>{2, 4}));
  EXPECT_EQ(valid_proc_counts(leaf("v", Shape{7})), (std::vector<Extent>{7}));
  EXPECT_TRUE(valid_proc_counts(leaf("v", Shape{1})).empty());
}

TEST(Onf, PartitionErrorListsValidCounts) {
  try {
    lower(aba(), 5);
    FAIL() << "expected a partition error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPartition);
    EXPECT_NE(std::string(e.what()).find("{2, 4}"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] { lower(aba(), 0); }), ErrorKind::kPartition);
}

TEST(Onf, LoweringErrors) {
  EXPECT_EQ(kind_of([] { lower(leaf("E", Shape{0, 3}), 1); }), ErrorKind::kLowering);
  // Row-major <2 6> and <3 4> share no axis boundary besides the ends, so
  // the read offset is not affine in the output atoms.
  EXPECT_EQ(kind_of([] { lower(reshape(Shape{2, 6}, leaf("B", Shape{3, 4})), 1); }), ErrorKind::kLowering);
  EXPECT_EQ(kind_of([] { valid_proc_counts(reshape(Shape{2, 6}, leaf("B", Shape{3, 4}))); }),
            ErrorKind::kLowering);
}

TEST(Onf, PartitionsAreContiguousEqualBlocks) {
  const LoopPlan plan = lower(aba(), 4);
  std::vector<Extent> all;
  for (Extent p = 0; p < 4; ++p) {
    const auto w = write_offsets(plan, p);
    ASSERT_EQ(w.size(), 36u);
    EXPECT_EQ(w.front(), 36 * p);
    EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
    EXPECT_EQ(w.back() - w.front(), 35);
    all.insert(all.end(), w.begin(), w.end());
  }
  std::sort(all.begin(), all.end());
  EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  EXPECT_EQ(kind_of([&] { write_offsets(plan, 4); }), ErrorKind::kRange);
}

TEST(Onf, ParallelExecutionIsBitIdentical) {
  const Environment env{{"A", DenseArray(Shape{2, 2}, {0.1, 0.2, 0.3, 0.7})},
                        {"B", DenseArray(Shape{3, 3}, {1.0 / 3, 2, 3, 4, 5, 6, 7, 8, 1.0 / 7})}};
  for (Extent procs : {1, 2, 4}) {
    const LoopPlan plan = lower(aba(), procs);
    const DenseArray seq = execute_plan(plan, flatten_operands(env), Execution::kSequential);
    const DenseArray par = execute_plan(plan, flatten_operands(env), Execution::kParallel);
    EXPECT_TRUE(std::equal(seq.data().begin(), seq.data().end(), par.data().begin(), par.data().end()));
  }
}

TEST(Onf, JsonRoundTrip) {
  const LoopPlan plan = lower(aba(), 4);
  const std::string text = plan_to_json(plan);
  EXPECT_EQ(plan_from_json(text), plan);
  EXPECT_EQ(plan_to_json(plan_from_json(text)), text);
  EXPECT_NE(text.find("\"procs\": 4"), std::string::npos);
  EXPECT_EQ(kind_of([] { plan_from_json("{}"); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { plan_from_json("[1,"); }), ErrorKind::kParse);
}

TEST(Onf, IntegrityChecks) {
  const LoopPlan good = lower(aba(), 4);
  const BufferSet buffers = flatten_operands(aba_env());

  LoopPlan bad_count = good;
  bad_count.loops[1].count = 8;
  EXPECT_EQ(kind_of([&] { validate_plan(bad_count); }), ErrorKind::kPlanIntegrity);

  LoopPlan unknown_var = good;
  unknown_var.body.write_offset.terms[0].var = "z";
  EXPECT_EQ(kind_of([&] { validate_plan(unknown_var); }), ErrorKind::kPlanIntegrity);

  LoopPlan double_write = good;
  double_write.body.write_offset.terms[1].coeff = 0;
  double_write.body.write_offset.terms[2].coeff = 9;  // still 144 iterations, collisions guaranteed
  EXPECT_EQ(kind_of([&] { execute_plan(double_write, buffers); }), ErrorKind::kPlanIntegrity);

  LoopPlan overrun = good;
  overrun.body.nodes[0].offset.constant = 10;
  EXPECT_EQ(kind_of([&] { execute_plan(overrun, buffers); }), ErrorKind::kPlanIntegrity);

  EXPECT_EQ(kind_of([&] { execute_plan(good, BufferSet{buffers[0]}); }), ErrorKind::kPlanIntegrity);
}

}  // namespace
}  // namespace moa
