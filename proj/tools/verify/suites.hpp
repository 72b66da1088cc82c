// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "moa/expr.hpp"

namespace moa::verify {

struct SuiteResult {
  explicit SuiteResult(std::string suite = {}) : name(std::move(suite)) {}

  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  std::vector<std::string> messages;  // first few failures

  bool ok() const { return failures == 0; }
  void check(bool pass, const std::string& what);
};

/// Leaves bound to integer-valued arrays plus every expression of the grid.
struct ExpressionGrid {
  Environment env;
  std::vector<Expr> expressions;
};

/// Expressions up to depth 4 over leaves with at most 64 elements, using
/// outer products with all four scalar ops, transposes, reshapes and kron.
/// Depths 0-2 are enumerated completely; depths 3 and 4 are a deterministic
/// stride through the candidates so the grid stays desk-sized. Outputs are
/// capped at 4096 elements.
ExpressionGrid expression_grid();

SuiteResult run_dnf_suite(std::uint64_t seed);
SuiteResult run_kron_suite(std::uint64_t seed);
SuiteResult run_transpose_suite(std::uint64_t seed);
SuiteResult run_onf_suite(std::uint64_t seed);
SuiteResult run_dyadics_suite(std::uint64_t seed);

/// "dnf", "kron", "transpose", "onf", "dyadics"
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

}  // namespace moa::verify
