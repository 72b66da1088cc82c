// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>
#include <stdexcept>

#include "oracles.hpp"
#include "suites.hpp"

namespace moa::verify {
namespace {

void expect_clean(const SuiteResult& r) {
  EXPECT_TRUE(r.ok()) << r.name << ": " << (r.messages.empty() ? "" : r.messages.front());
  EXPECT_GT(r.checks, 0u);
}

TEST(Suites, TransposeLaws) { expect_clean(run_transpose_suite(oracle::seed_from_env())); }
TEST(Suites, KronEquivalence) { expect_clean(run_kron_suite(oracle::seed_from_env())); }
TEST(Suites, DyadicIdentities) { expect_clean(run_dyadics_suite(oracle::seed_from_env())); }

TEST(Suites, UnknownNameIsRejected) {
  EXPECT_THROW(run_suite("nope", 1), std::invalid_argument);
  EXPECT_EQ(suite_names().size(), 5u);
}

TEST(Suites, FailedChecksAreRecorded) {
  SuiteResult r{"x"};
  r.check(true, "fine");
  r.check(false, "broken");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.checks, 2u);
  ASSERT_EQ(r.messages.size(), 1u);
  EXPECT_EQ(r.messages[0], "broken");
}

TEST(Grid, CoversEveryConstructorAndOp) {
  const ExpressionGrid grid = expression_grid();
  std::set<std::string> heads;
  std::set<ScalarOp> ops;
  std::size_t max_depth_seen = 0;
  for (const auto& e : grid.expressions) {
    EXPECT_LE(pi(e->shape()), 4096);
    if (const auto* o = e->as<OuterNode>()) ops.insert(o->op);
    if (e->as<KronNode>()) heads.insert("kron");
    if (e->as<TransposeNode>()) heads.insert("transpose");
    if (e->as<ReshapeNode>()) heads.insert("reshape");
    if (e->as<OuterNode>()) heads.insert("outer");
    max_depth_seen = std::max(max_depth_seen, leaf_occurrences(e));
  }
  EXPECT_EQ(heads.size(), 4u);
  EXPECT_EQ(ops.size(), 4u);
  EXPECT_GE(max_depth_seen, 4u);
  for (const auto& [id, a] : grid.env) EXPECT_LE(a.size(), 64) << id;
}

TEST(Grid, IsDeterministic) {
  const ExpressionGrid a = expression_grid();
  const ExpressionGrid b = expression_grid();
  ASSERT_EQ(a.expressions.size(), b.expressions.size());
  for (std::size_t k = 0; k < a.expressions.size(); k += 97) {
    EXPECT_EQ(to_text(a.expressions[k]), to_text(b.expressions[k]));
  }
  EXPECT_EQ(a.env, b.env);
}

}  // namespace
}  // namespace moa::verify
