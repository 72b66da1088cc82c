// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "moa/expr.hpp"
#include "moa/instrumentation.hpp"
#include "moa/parser.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace moa {
namespace {

using testing::kind_of;

Environment example_env() { return {{"A", fixtures::matrix_a()}, {"B", fixtures::matrix_b()}}; }

TEST(ScalarOp, ApplyAndNames) {
  EXPECT_EQ(apply(ScalarOp::kSub, 2, 5), -3);
  EXPECT_EQ(apply(ScalarOp::kDiv, 1, 4), 0.25);
  EXPECT_EQ(kind_of([] { apply(ScalarOp::kDiv, 1, 0); }), ErrorKind::kEval);
  EXPECT_EQ(scalar_op_from_string("add"), ScalarOp::kAdd);
  EXPECT_STREQ(symbol(ScalarOp::kMul), "*");
  EXPECT_EQ(kind_of([] { scalar_op_from_string("pow"); }), ErrorKind::kParse);
}

TEST(InferShape, FollowsEachConstructor) {
  const Expr a = leaf("A", Shape{2, 2});
  const Expr b = leaf("B", Shape{3, 4});
  EXPECT_EQ(infer_shape(outer(ScalarOp::kMul, a, b)), (Shape{2, 2, 3, 4}));
  EXPECT_EQ(infer_shape(kron(a, b)), (Shape{6, 8}));
  EXPECT_EQ(infer_shape(transpose(AxisPermutation{0, 2, 1, 3}, outer(ScalarOp::kMul, a, b))),
            (Shape{2, 3, 2, 4}));
  EXPECT_EQ(infer_shape(reshape(Shape{4, 12}, outer(ScalarOp::kAdd, a, b))), (Shape{4, 12}));
  EXPECT_EQ(infer_shape(outer(ScalarOp::kMul, leaf("s", Shape{}), a)), (Shape{2, 2}));
}

TEST(InferShape, IllFormedNodes) {
  const Expr a = leaf("A", Shape{2, 2});
  EXPECT_EQ(kind_of([&] { reshape(Shape{5}, a); }), ErrorKind::kShape);
  EXPECT_EQ(kind_of([&] { transpose(AxisPermutation{0, 2, 1}, a); }), ErrorKind::kPermutation);
  EXPECT_EQ(kind_of([&] { kron(a, leaf("v", Shape{3})); }), ErrorKind::kShape);
  EXPECT_EQ(kind_of([&] { leaf_shapes(outer(ScalarOp::kMul, a, leaf("A", Shape{3}))); }), ErrorKind::kShape);
}

TEST(Expr, LeafOccurrencesCountsEveryUse) {
  const Expr a = leaf("A", Shape{2, 2});
  const Expr aa = outer(ScalarOp::kMul, a, a);
  EXPECT_EQ(leaf_occurrences(outer(ScalarOp::kAdd, aa, aa)), 4u);
  EXPECT_EQ(leaf_shapes(aa).size(), 1u);
}

TEST(Expr, TextParsesBack) {
  const ShapeTable shapes{{"A", Shape{2, 2}}, {"B", Shape{3, 4}}};
  const std::string text = "reshape([4, 12], transpose([0, 2, 1, 3], outer(div, A, kron(A, A))))";
  EXPECT_EQ(kind_of([&] { parse_expression(text, shapes); }), ErrorKind::kShape);
  const std::string ok = "transpose([1,0], kron(A, B))";
  EXPECT_EQ(to_text(parse_expression(ok, shapes)), ok);
}

TEST(Dnf, OuterProductTopLeftIsFive) {
  const Expr e = outer(ScalarOp::kMul, leaf("A", Shape{2, 2}), leaf("B", Shape{3, 4}));
  EXPECT_EQ(eval_element(MultiIndex{0, 0, 0, 0}, e, example_env()), 5);
  EXPECT_EQ(eval_element(MultiIndex{1, 1, 2, 3}, e, example_env()), 64);
}

TEST(Dnf, ReadPlanNamesLeafIndices) {
  const Expr a = leaf("A", Shape{2, 2});
  const Expr e = outer(ScalarOp::kMul, outer(ScalarOp::kMul, a, leaf("B", Shape{3, 3})), a);
  const ScalarReadPlan plan = psi_reduce(MultiIndex{0, 0, 1, 2, 0, 1}, e);
  EXPECT_EQ(plan.to_string(), "((<0 0> psi A) * (<1 2> psi B)) * (<0 1> psi A)");
  ASSERT_EQ(plan.reads.size(), 3u);
  EXPECT_EQ(plan.reads[1].index, (MultiIndex{1, 2}));
}

TEST(Dnf, TransposeGathersThroughGradeup) {
  const Environment env{{"T", fixtures::planes_243()}};
  const Expr e = transpose(AxisPermutation{2, 0, 1}, leaf("T", Shape{2, 4, 3}));
  EXPECT_EQ(psi_reduce(MultiIndex{2, 1, 3}, e).to_string(), "<1 3 2> psi T");
  EXPECT_EQ(eval_element(MultiIndex{2, 1, 3}, e, env), 31);
}

TEST(Dnf, SymbolicForm) {
  const Expr a = leaf("A", Shape{2, 2});
  const Expr e = outer(ScalarOp::kMul, outer(ScalarOp::kMul, a, leaf("B", Shape{3, 3})), a);
  EXPECT_EQ(dnf_symbolic(e), "((<i j> psi A) * (<k l> psi B)) * (<m n> psi A)");
  EXPECT_EQ(dnf_symbolic(transpose(AxisPermutation{1, 0}, a)), "<j i> psi A");
  EXPECT_EQ(kind_of([&] { dnf_symbolic(reshape(Shape{4}, a)); }), ErrorKind::kShape);
  EXPECT_EQ(index_names(3), (std::vector<std::string>{"i", "j", "k"}));
}

TEST(Dnf, ElementEvaluationReadsOncePerLeafAndAllocatesNothing) {
  const Environment env = example_env();
  const Expr a = leaf("A", Shape{2, 2});
  const Expr e = reshape(Shape{4, 48}, outer(ScalarOp::kAdd, kron(a, leaf("B", Shape{3, 4})), a));
  instrumentation::reset();
  eval_element(MultiIndex{3, 17}, e, env);
  const auto c = instrumentation::snapshot();
  EXPECT_EQ(c.scalar_reads, 3u);
  EXPECT_EQ(c.array_allocations, 0u);
}

TEST(Dnf, IndexErrors) {
  const Expr a = leaf("A", Shape{2, 2});
  EXPECT_EQ(kind_of([&] { psi_reduce(MultiIndex{0}, a); }), ErrorKind::kIndex);
  EXPECT_EQ(kind_of([&] { eval_element(MultiIndex{0, 2}, a, example_env()); }), ErrorKind::kIndex);
}

TEST(Dnf, BindingErrors) {
  const Expr a = leaf("A", Shape{2, 2});
  EXPECT_EQ(kind_of([&] { eval_element(MultiIndex{0, 0}, a, Environment{}); }), ErrorKind::kEval);
  const Environment wrong{{"A", fixtures::matrix_b()}};
  EXPECT_EQ(kind_of([&] { check_bindings(a, wrong); }), ErrorKind::kShape);
}

TEST(Dnf, DivisionByZeroIsAnEvalError) {
  const Environment env{{"A", fixtures::matrix_a()}, {"z", DenseArray(Shape{1}, {0.0})}};
  const Expr e = outer(ScalarOp::kDiv, leaf("A", Shape{2, 2}), leaf("z", Shape{1}));
  EXPECT_EQ(kind_of([&] { eval_element(MultiIndex{0, 0, 0}, e, env); }), ErrorKind::kEval);
}

TEST(Materialize, MatchesStepwiseOracle) {
  const Environment env{{"A", fixtures::matrix_a()}, {"T", fixtures::planes_243()}};
  const Expr e = reshape(Shape{6, 16}, transpose(AxisPermutation{3, 0, 4, 1, 2},
                                                 outer(ScalarOp::kSub, leaf("A", Shape{2, 2}),
                                                       leaf("T", Shape{2, 4, 3}))));
  EXPECT_EQ(materialize(e, env), oracle::step_materialize(e, env));
}

TEST(Materialize, ScalarExpression) {
  const Environment env{{"s", DenseArray::scalar(3)}};
  const Expr s = leaf("s", Shape{});
  EXPECT_EQ(materialize(outer(ScalarOp::kMul, s, s), env), DenseArray::scalar(9));
}

}  // namespace
}  // namespace moa
