// SPDX-License-Identifier: Apache-2.0

#include "suites.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fixtures.hpp"
#include "moa/dyadics.hpp"
#include "moa/error.hpp"
#include "moa/instrumentation.hpp"
#include "moa/kronecker.hpp"
#include "moa/onf.hpp"
#include "moa/permute.hpp"
#include "oracles.hpp"

namespace moa::verify {

void SuiteResult::check(bool pass, const std::string& what) {
  ++checks;
  if (!pass) {
    ++failures;
    if (messages.size() < 10) messages.push_back(what);
  }
}

// -- expression grid -------------------------------------------------------------

namespace {

constexpr Extent kMaxGridElements = 4096;
constexpr std::size_t kMaxDeepLevel = 600;

std::vector<AxisPermutation> grid_permutations(std::size_t rank) {
  std::vector<AxisPermutation> out;
  if (rank <= 3) {
    std::vector<Extent> p(rank);
    std::iota(p.begin(), p.end(), Extent{0});
    do out.emplace_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
  }
  std::vector<Extent> rev(rank), rot(rank);
  for (std::size_t k = 0; k < rank; ++k) {
    rev[k] = static_cast<Extent>(rank - 1 - k);
    rot[k] = static_cast<Extent>((k + 1) % rank);
  }
  out.emplace_back(rev);
  out.emplace_back(rot);
  if (rank == 4) {
    out.push_back(AxisPermutation{0, 2, 1, 3});
    out.push_back(AxisPermutation{1, 0, 3, 2});
  }
  return out;
}

std::vector<Shape> grid_reshapes(const Shape& s) {
  std::vector<Shape> out;
  const Extent n = pi(s);
  if (s.rank() != 1) out.push_back(Shape{n});
  if (s.rank() >= 2) {
    std::vector<Extent> merged{s[0] * s[1]};
    merged.insert(merged.end(), s.begin() + 2, s.end());
    out.emplace_back(std::move(merged));
    std::vector<Extent> reversed(s.vec().rbegin(), s.vec().rend());
    if (reversed != s.vec()) out.emplace_back(std::move(reversed));
  }
  if (s.rank() >= 1 && s[0] > 2 && s[0] % 2 == 0) {
    std::vector<Extent> split{2, s[0] / 2};
    split.insert(split.end(), s.begin() + 1, s.end());
    out.emplace_back(std::move(split));
  }
  return out;
}

void add_binary(std::vector<Expr>& out, const Expr& x, const Expr& y) {
  for (ScalarOp op : {ScalarOp::kMul, ScalarOp::kAdd, ScalarOp::kSub, ScalarOp::kDiv}) {
    out.push_back(outer(op, x, y));
  }
  if (x->rank() == 2 && y->rank() == 2) out.push_back(kron(x, y));
}

}  // namespace

ExpressionGrid expression_grid() {
  ExpressionGrid grid;
  oracle::Rng rng(7);
  const std::vector<std::pair<std::string, Shape>> leaves = {
      {"A", Shape{2, 2}}, {"B", Shape{3, 2}}, {"v", Shape{3}}, {"s", Shape{}}, {"C", Shape{4, 4, 4}}};
  std::vector<Expr> level;
  for (const auto& [id, shape] : leaves) {
    grid.env.emplace(id, oracle::random_int_array(shape, rng));
    level.push_back(leaf(id, shape));
  }
  const std::vector<Expr> leaf_exprs = level;
  grid.expressions = level;

  for (int depth = 1; depth <= 4; ++depth) {
    std::vector<Expr> candidates;
    for (const auto& x : level) {
      for (const auto& t : grid_permutations(x->rank())) candidates.push_back(transpose(t, x));
      for (const auto& s : grid_reshapes(x->shape())) candidates.push_back(reshape(s, x));
      for (const auto& l : leaf_exprs) {
        add_binary(candidates, x, l);
        add_binary(candidates, l, x);
      }
    }
    std::erase_if(candidates, [](const Expr& e) {
      return pi(e->shape()) > kMaxGridElements || e->rank() > 8;
    });
    if (depth >= 3 && candidates.size() > kMaxDeepLevel) {
      const std::size_t stride = (candidates.size() + kMaxDeepLevel - 1) / kMaxDeepLevel;
      std::vector<Expr> thinned;
      for (std::size_t k = 0; k < candidates.size(); k += stride) thinned.push_back(candidates[k]);
      candidates = std::move(thinned);
    }
    grid.expressions.insert(grid.expressions.end(), candidates.begin(), candidates.end());
    level = std::move(candidates);
  }
  return grid;
}

// -- dnf --------------------------------------------------------------------------

namespace {

bool is_eval_error(const Error& e) { return e.kind() == ErrorKind::kEval; }

}  // namespace

SuiteResult run_dnf_suite(std::uint64_t) {
  SuiteResult r{"dnf"};
  const ExpressionGrid grid = expression_grid();
  for (const auto& e : grid.expressions) {
    DenseArray expected;
    try {
      expected = oracle::step_materialize(e, grid.env);
    } catch (const Error& err) {
      if (!is_eval_error(err)) throw;
      bool raised = false;
      try {
        materialize(e, grid.env);
      } catch (const Error& again) {
        raised = is_eval_error(again);
      }
      r.check(raised, to_text(e) + ": oracle raised an evaluation error, index rewriting did not");
      continue;
    }

    bool same = expected.shape() == infer_shape(e);
    const Shape& s = e->shape();
    std::vector<Extent> i(s.rank(), 0);
    do {
      same = same && eval_element(MultiIndex(i), e, grid.env) == expected.at(i);
    } while (same && next_index(i, s));
    r.check(same, to_text(e) + ": eval_element disagrees with step materialization");

    // One read per leaf occurrence and no temporary arrays, on the last index.
    const MultiIndex last = unravel_rowmajor(pi(s) - 1, s);
    instrumentation::reset();
    const double v = eval_element(last, e, grid.env);
    const auto counts = instrumentation::snapshot();
    r.check(counts.scalar_reads == leaf_occurrences(e) && counts.array_allocations == 0,
            to_text(e) + ": element evaluation read " + std::to_string(counts.scalar_reads) +
                " scalars and allocated " + std::to_string(counts.array_allocations) + " arrays");

    const ScalarReadPlan plan = psi_reduce(last, e);
    r.check(plan.reads.size() == leaf_occurrences(e) && evaluate(plan, grid.env) == v,
            to_text(e) + ": read plan disagrees with direct evaluation");
  }
  return r;
}

// -- kron ---------------------------------------------------------------------------

SuiteResult run_kron_suite(std::uint64_t seed) {
  SuiteResult r{"kron"};
  oracle::Rng rng(seed);
  std::uniform_int_distribution<Extent> dim(1, 4);

  for (int trial = 0; trial < 200; ++trial) {
    const Shape sa{dim(rng), dim(rng)};
    const Shape sb{dim(rng), dim(rng)};
    const Environment env{{"A", oracle::random_int_array(sa, rng, -9, 9)},
                          {"B", oracle::random_int_array(sb, rng, -9, 9)}};
    const Expr e = kron_desugar(leaf("A", sa), leaf("B", sb));
    const DenseArray blocks = oracle::kron_blocks(env.at("A"), env.at("B"));
    r.check(materialize(e, env) == blocks,
            "kron " + to_string(sa) + " x " + to_string(sb) + ": permuted outer product differs from block layout");

    bool entries = true;
    std::vector<Extent> rc(2, 0);
    do {
      entries = entries && kron_entry(MultiIndex(rc), env.at("A"), env.at("B")) ==
                               eval_element(MultiIndex(rc), e, env);
    } while (entries && next_index(rc, e->shape()));
    r.check(entries, "kron " + to_string(sa) + " x " + to_string(sb) + ": composite-index entries differ");
  }

  for (int k = 2; k <= 6; ++k) {
    std::vector<Expr> chain;
    Environment env;
    for (int f = 0; f < k; ++f) {
      const std::string id = "F" + std::to_string(f);
      env.emplace(id, oracle::random_int_array(Shape{2, 2}, rng, 1, 5));
      chain.push_back(leaf(id, Shape{2, 2}));
    }
    const Expr e = multi_kron(chain);
    const Extent side = Extent{1} << k;
    r.check(e->shape() == Shape{side, side}, "chain of " + std::to_string(k) + ": wrong shape " + to_string(e->shape()));

    std::uniform_int_distribution<Extent> coord(0, side - 1);
    for (int probe = 0; probe < 16; ++probe) {
      const MultiIndex rc{coord(rng), coord(rng)};
      instrumentation::reset();
      eval_element(rc, e, env);
      const auto counts = instrumentation::snapshot();
      r.check(counts.scalar_reads == static_cast<std::uint64_t>(k) && counts.array_allocations == 0,
              "chain of " + std::to_string(k) + " at " + to_string(rc) + ": " +
                  std::to_string(counts.scalar_reads) + " reads, " +
                  std::to_string(counts.array_allocations) + " arrays");
    }
    if (k <= 5) {
      DenseArray blocks = oracle::kron_blocks(env.at("F0"), env.at("F1"));
      for (int f = 2; f < k; ++f) blocks = oracle::kron_blocks(blocks, env.at("F" + std::to_string(f)));
      r.check(materialize(e, env) == blocks, "chain of " + std::to_string(k) + ": differs from iterated blocks");
    }
  }
  return r;
}

// -- transpose ----------------------------------------------------------------------

SuiteResult run_transpose_suite(std::uint64_t seed) {
  SuiteResult r{"transpose"};
  const DenseArray a = fixtures::planes_243();

  const DenseArray rev = transpose_general(AxisPermutation{2, 1, 0}, a);
  r.check(rev.shape() == Shape{3, 4, 2}, "<2 1 0> shape");
  bool rule = true;
  for (Extent i = 0; i < 3; ++i)
    for (Extent j = 0; j < 4; ++j)
      for (Extent k = 0; k < 2; ++k) rule = rule && rev.at(std::vector<Extent>{i, j, k}) == a.at(std::vector<Extent>{k, j, i});
  r.check(rule, "<2 1 0> reverses index components");

  const DenseArray rot = transpose_general(AxisPermutation{2, 0, 1}, a);
  r.check(rot.shape() == Shape{3, 2, 4}, "<2 0 1> shape");
  rule = true;
  for (Extent i = 0; i < 3; ++i)
    for (Extent j = 0; j < 2; ++j)
      for (Extent k = 0; k < 4; ++k) rule = rule && rot.at(std::vector<Extent>{i, j, k}) == a.at(std::vector<Extent>{j, k, i});
  r.check(rule, "<2 0 1> maps <i j k> to <j k i>");

  r.check(gradeup(std::vector<Extent>{2, 0, 1, 3}) == std::vector<Extent>{1, 2, 0, 3}, "gradeup <2 0 1 3>");
  r.check(gradeup(std::vector<Extent>{1, 1, 0}) == std::vector<Extent>{2, 0, 1}, "gradeup keeps ties in order");

  for (std::size_t n = 0; n <= 5; ++n) {
    std::vector<Extent> t(n);
    std::iota(t.begin(), t.end(), Extent{0});
    bool all = true;
    do {
      const auto g = gradeup(t);
      for (std::size_t k = 0; k < n; ++k) all = all && t[static_cast<std::size_t>(g[k])] == static_cast<Extent>(k);
    } while (std::next_permutation(t.begin(), t.end()));
    r.check(all, "t[gradeup(t)] is the identity for length " + std::to_string(n));
  }

  oracle::Rng rng(seed);
  for (std::size_t rank : {3u, 4u}) {
    std::vector<Extent> dims;
    for (std::size_t k = 0; k < rank; ++k) dims.push_back(static_cast<Extent>(2 + k));
    const DenseArray x = oracle::random_int_array(Shape(dims), rng);
    std::vector<Extent> t(rank);
    std::iota(t.begin(), t.end(), Extent{0});
    bool shape_law = true, composition = true;
    do {
      const AxisPermutation tp(t);
      const DenseArray xt = transpose_general(tp, x);
      shape_law = shape_law && xt.shape() == permute_shape(x.shape(), tp);
      std::vector<Extent> u(rank);
      std::iota(u.begin(), u.end(), Extent{0});
      do {
        std::vector<Extent> w(rank);
        for (std::size_t k = 0; k < rank; ++k) w[k] = t[static_cast<std::size_t>(u[k])];
        composition = composition &&
                      transpose_general(AxisPermutation(u), xt) == transpose_general(AxisPermutation(w), x);
      } while (std::next_permutation(u.begin(), u.end()));
    } while (std::next_permutation(t.begin(), t.end()));
    r.check(shape_law, "shape law on rank " + std::to_string(rank));
    r.check(composition, "(x^T_t)^T_u == x^T_{t[u]} on rank " + std::to_string(rank));
    r.check(transpose_general(AxisPermutation::identity(rank), x) == x, "identity transpose on rank " + std::to_string(rank));
  }
  return r;
}

// -- onf ------------------------------------------------------------------------------

namespace {

void check_plan(SuiteResult& r, const Expr& e, Extent procs, const Environment& env, const DenseArray& expected) {
  const std::string tag = to_text(e) + " on " + std::to_string(procs) + " procs";
  const LoopPlan plan = lower(e, procs);
  const BufferSet buffers = flatten_operands(env);
  const DenseArray seq = execute_plan(plan, buffers, Execution::kSequential);
  r.check(seq == expected, tag + ": plan result differs from materialize");
  const DenseArray par = execute_plan(plan, buffers, Execution::kParallel);
  r.check(std::equal(seq.data().begin(), seq.data().end(), par.data().begin(), par.data().end()),
          tag + ": parallel execution is not identical");

  const Extent n = pi(e->shape());
  const Extent parts = plan.has_processor_loop() ? procs : 1;
  bool laws = true;
  for (Extent p = 0; p < parts; ++p) {
    const auto offsets = write_offsets(plan, p);
    const Extent block = n / parts;
    laws = laws && static_cast<Extent>(offsets.size()) == block;
    for (Extent k = 0; laws && k < block; ++k) laws = offsets[static_cast<std::size_t>(k)] == p * block + k;
  }
  r.check(laws, tag + ": partitions are not equal contiguous row-major blocks");
}

}  // namespace

SuiteResult run_onf_suite(std::uint64_t) {
  SuiteResult r{"onf"};

  {
    const Environment env{{"A", fixtures::matrix_a()}, {"B", DenseArray::iota(Shape{3, 3}, 1.0)}};
    const Expr a = leaf("A", Shape{2, 2});
    const Expr e = outer(ScalarOp::kMul, outer(ScalarOp::kMul, a, leaf("B", Shape{3, 3})), a);
    const LoopPlan plan = lower(e, 4);
    bool bounds = plan.loops.size() == 3;
    const Extent want[3] = {4, 9, 4};
    for (std::size_t k = 0; bounds && k < 3; ++k) {
      bounds = plan.loops[k].start == 0 && plan.loops[k].stop == want[k] && plan.loops[k].stride == 1 &&
               plan.loops[k].count == want[k];
    }
    r.check(bounds, "((A op B) op A) on 4 procs: loops (4, 9, 4)");
    r.check(body_to_string(plan) == "out[36*p + 4*q + r] = (avec[p] * bvec[q]) * avec[r]",
            "((A op B) op A) on 4 procs: body " + body_to_string(plan));
    check_plan(r, e, 4, env, materialize(e, env));
  }

  const ExpressionGrid grid = expression_grid();
  for (const auto& e : grid.expressions) {
    DenseArray expected;
    try {
      expected = materialize(e, grid.env);
    } catch (const Error& err) {
      if (!is_eval_error(err)) throw;
      ++r.skipped;
      continue;
    }
    std::vector<Extent> procs{1};
    try {
      const auto more = valid_proc_counts(e);
      procs.insert(procs.end(), more.begin(), more.end());
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::kLowering) throw;
      ++r.skipped;  // reshape without an affine index map
      continue;
    }
    for (Extent p : procs) check_plan(r, e, p, grid.env, expected);
  }
  return r;
}

// -- dyadics --------------------------------------------------------------------------

SuiteResult run_dyadics_suite(std::uint64_t seed) {
  SuiteResult r{"dyadics"};
  oracle::Rng rng(seed);
  std::uniform_int_distribution<Extent> dim(2, 5);

  for (int trial = 0; trial < 100; ++trial) {
    const Extent n = dim(rng);
    const DenseArray q = oracle::random_unit_vector(n, rng);
    const DenseArray p = projector_parallel(q);
    const double idem = max_abs_diff(oracle::matmul(p, p), p);
    r.check(idem <= 1e-12, "P*P != P by " + format_scalar(idem));
    const double annihilate = oracle::max_abs(oracle::matmul(oracle::subtract(oracle::identity(n), p), p));
    r.check(annihilate <= 1e-12, "(I - P)*P != 0 by " + format_scalar(annihilate));
  }

  for (int trial = 0; trial < 50; ++trial) {
    const Extent n = dim(rng);
    const DenseArray h = oracle::random_symmetric(n, rng);
    const auto eig = oracle::jacobi_eigen(h);
    const double err = max_abs_diff(spectral_reconstruct(eig.values, eig.vectors), h);
    r.check(err <= 1e-10, "spectral reconstruction off by " + format_scalar(err));

    bool delta = true;
    for (std::size_t i = 0; i < eig.vectors.size(); ++i) {
      const DenseArray pi_i = dyad(eig.vectors[i], eig.vectors[i]);
      for (std::size_t j = 0; j < eig.vectors.size(); ++j) {
        const DenseArray col = reshape(Shape{n, 1}, eig.vectors[j]);
        const DenseArray applied = oracle::matmul(pi_i, col);
        const DenseArray want = i == j ? reshape(Shape{n, 1}, eig.vectors[i]) : DenseArray(Shape{n, 1}, std::vector<double>(static_cast<std::size_t>(n), 0.0));
        delta = delta && max_abs_diff(applied, want) <= 1e-12;
      }
    }
    r.check(delta, "(u_i (x) u_i) u_j != delta_ij u_i");
  }

  const DenseArray u = DenseArray(Shape{3}, {1, 2, 3});
  const DenseArray v = DenseArray(Shape{2}, {4, 5});
  r.check(dyad(u, v) == oracle::outer_product(ScalarOp::kMul, u, v), "dyad agrees with the outer product");
  r.check(dyad(u, v) == transpose_matrix(dyad(v, u)), "dyad(u, v) is the transpose of dyad(v, u)");
  return r;
}

// -- registry ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dnf", "kron", "transpose", "onf", "dyadics"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "dnf") return run_dnf_suite(seed);
  if (name == "kron") return run_kron_suite(seed);
  if (name == "transpose") return run_transpose_suite(seed);
  if (name == "onf") return run_onf_suite(seed);
  if (name == "dyadics") return run_dyadics_suite(seed);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace moa::verify
