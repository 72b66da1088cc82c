// SPDX-License-Identifier: Apache-2.0

#include "moa/expr.hpp"

#include <sstream>

#include "moa/error.hpp"
#include "moa/instrumentation.hpp"
#include "moa/kronecker.hpp"

namespace moa {

const char* to_string(ScalarOp op) {
  switch (op) {
    case ScalarOp::kMul: return "mul";
    case ScalarOp::kAdd: return "add";
    case ScalarOp::kSub: return "sub";
    case ScalarOp::kDiv: return "div";
  }
  return "?";
}

const char* symbol(ScalarOp op) {
  switch (op) {
    case ScalarOp::kMul: return "*";
    case ScalarOp::kAdd: return "+";
    case ScalarOp::kSub: return "-";
    case ScalarOp::kDiv: return "/";
  }
  return "?";
}

ScalarOp scalar_op_from_string(std::string_view name) {
  if (name == "mul") return ScalarOp::kMul;
  if (name == "add") return ScalarOp::kAdd;
  if (name == "sub") return ScalarOp::kSub;
  if (name == "div") return ScalarOp::kDiv;
  throw Error(ErrorKind::kParse,
              "unknown scalar op '" + std::string(name) + "' (expected mul, add, sub or div)");
}

double apply(ScalarOp op, double lhs, double rhs) {
  switch (op) {
    case ScalarOp::kMul: return lhs * rhs;
    case ScalarOp::kAdd: return lhs + rhs;
    case ScalarOp::kSub: return lhs - rhs;
    case ScalarOp::kDiv:
      if (rhs == 0.0) throw Error(ErrorKind::kEval, "division by zero");
      return lhs / rhs;
  }
  return 0.0;
}

// -- construction -----------------------------------------------------------

namespace {

void require_child(const Expr& e, const char* what) {
  if (!e) throw Error(ErrorKind::kShape, std::string(what) + ": null operand");
}

}  // namespace

Expr leaf(std::string id, Shape shape) {
  if (id.empty()) throw Error(ErrorKind::kShape, "leaf id must not be empty");
  return std::make_shared<const ExprNode>(std::move(shape), LeafNode{std::move(id)});
}

Expr outer(ScalarOp op, Expr left, Expr right) {
  require_child(left, "outer");
  require_child(right, "outer");
  Shape s = concat(left->shape(), right->shape());
  pi(s);
  return std::make_shared<const ExprNode>(std::move(s),
                                          OuterNode{op, std::move(left), std::move(right)});
}

Expr transpose(AxisPermutation t, Expr child) {
  require_child(child, "transpose");
  Shape s = permute_shape(child->shape(), t);
  std::vector<Extent> gather = gradeup(t.entries());
  return std::make_shared<const ExprNode>(
      std::move(s), TransposeNode{std::move(t), std::move(gather), std::move(child)});
}

Expr reshape(Shape s, Expr child) {
  require_child(child, "reshape");
  if (pi(s) != pi(child->shape())) {
    throw Error(ErrorKind::kShape, "reshape to " + to_string(s) + " (" + std::to_string(pi(s)) +
                                       " elements) from " + to_string(child->shape()) + " (" +
                                       std::to_string(pi(child->shape())) + " elements)");
  }
  return std::make_shared<const ExprNode>(std::move(s), ReshapeNode{std::move(child)});
}

Expr kron(Expr left, Expr right) {
  require_child(left, "kron");
  require_child(right, "kron");
  Expr lowered = kron_desugar(left, right);
  Shape s = lowered->shape();
  return std::make_shared<const ExprNode>(
      std::move(s), KronNode{std::move(left), std::move(right), std::move(lowered)});
}

Shape infer_shape(const Expr& e) {
  require_child(e, "infer_shape");
  return e->shape();
}

std::size_t leaf_occurrences(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LeafNode>) {
          return 1;
        } else if constexpr (std::is_same_v<T, OuterNode> || std::is_same_v<T, KronNode>) {
          return leaf_occurrences(n.left) + leaf_occurrences(n.right);
        } else {
          return leaf_occurrences(n.child);
        }
      },
      e->payload());
}

namespace {

void collect_leaves(const Expr& e, std::map<std::string, Shape>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LeafNode>) {
          auto [it, inserted] = out.emplace(n.id, e->shape());
          if (!inserted && it->second != e->shape()) {
            throw Error(ErrorKind::kShape, "leaf '" + n.id + "' used with shapes " +
                                               to_string(it->second) + " and " +
                                               to_string(e->shape()));
          }
        } else if constexpr (std::is_same_v<T, OuterNode> || std::is_same_v<T, KronNode>) {
          collect_leaves(n.left, out);
          collect_leaves(n.right, out);
        } else {
          collect_leaves(n.child, out);
        }
      },
      e->payload());
}

std::string list_text(std::span<const Extent> v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(v[k]);
  }
  return s + "]";
}

}  // namespace

std::map<std::string, Shape> leaf_shapes(const Expr& e) {
  std::map<std::string, Shape> out;
  collect_leaves(e, out);
  return out;
}

std::string to_text(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LeafNode>) {
          return n.id;
        } else if constexpr (std::is_same_v<T, OuterNode>) {
          return std::string("outer(") + to_string(n.op) + ", " + to_text(n.left) + ", " +
                 to_text(n.right) + ")";
        } else if constexpr (std::is_same_v<T, TransposeNode>) {
          return "transpose(" + list_text(n.perm.entries()) + ", " + to_text(n.child) + ")";
        } else if constexpr (std::is_same_v<T, ReshapeNode>) {
          return "reshape(" + list_text(e->shape().extents()) + ", " + to_text(n.child) + ")";
        } else {
          return "kron(" + to_text(n.left) + ", " + to_text(n.right) + ")";
        }
      },
      e->payload());
}

// -- psi reduction ------------------------------------------------------------

namespace {

/// Walks i psi node down to the leaves in postfix order. The sink sees
/// leaf(node, id, index) for each read and combine(op) after both operands
/// of an outer product.
template <typename Sink>
void reduce(const ExprNode& node, std::span<const Extent> i, Sink& sink) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LeafNode>) {
          sink.leaf(node, n.id, i);
        } else if constexpr (std::is_same_v<T, OuterNode>) {
          const std::size_t split = n.left->rank();
          reduce(*n.left, i.first(split), sink);
          reduce(*n.right, i.subspan(split), sink);
          sink.combine(n.op);
        } else if constexpr (std::is_same_v<T, TransposeNode>) {
          std::vector<Extent> j(i.size());
          for (std::size_t b = 0; b < j.size(); ++b) j[b] = i[static_cast<std::size_t>(n.gather[b])];
          reduce(*n.child, j, sink);
        } else if constexpr (std::is_same_v<T, ReshapeNode>) {
          const Shape& cs = n.child->shape();
          Extent offset = 0;
          for (std::size_t k = 0; k < i.size(); ++k) offset = offset * node.shape()[k] + i[k];
          std::vector<Extent> j(cs.rank());
          for (std::size_t k = cs.rank(); k-- > 0;) {
            j[k] = offset % cs[k];
            offset /= cs[k];
          }
          reduce(*n.child, j, sink);
        } else {
          reduce(*n.lowered, i, sink);
        }
      },
      node.payload());
}

void check_full_index(const MultiIndex& i, const Shape& s) {
  check_index(i.components(), s);
  if (i.size() != s.rank()) {
    throw Error(ErrorKind::kIndex, "expression of shape " + to_string(s) + " needs a full index, got " +
                                       to_string(i));
  }
}

const DenseArray& lookup(const Environment& env, const std::string& id, const Shape& expected) {
  auto it = env.find(id);
  if (it == env.end()) throw Error(ErrorKind::kEval, "unbound array '" + id + "'");
  if (it->second.shape() != expected) {
    throw Error(ErrorKind::kShape, "array '" + id + "' has shape " +
                                       to_string(it->second.shape()) + " but the expression uses " +
                                       to_string(expected));
  }
  return it->second;
}

struct PlanSink {
  ScalarReadPlan plan;
  void leaf(const ExprNode&, const std::string& id, std::span<const Extent> i) {
    plan.program.push_back({ScalarReadPlan::Step::Kind::kRead, plan.reads.size(), ScalarOp::kMul});
    plan.reads.push_back({id, MultiIndex(std::vector<Extent>(i.begin(), i.end()))});
  }
  void combine(ScalarOp op) {
    plan.program.push_back({ScalarReadPlan::Step::Kind::kApply, 0, op});
  }
};

struct EvalSink {
  const Environment& env;
  std::vector<double> stack;
  void leaf(const ExprNode& node, const std::string& id, std::span<const Extent> i) {
    const DenseArray& a = lookup(env, id, node.shape());
    Extent offset = 0;
    for (std::size_t k = 0; k < i.size(); ++k) offset = offset * node.shape()[k] + i[k];
    instrumentation::count_scalar_read();
    stack.push_back(a.data()[static_cast<std::size_t>(offset)]);
  }
  void combine(ScalarOp op) {
    const double rhs = stack.back();
    stack.pop_back();
    stack.back() = apply(op, stack.back(), rhs);
  }
};

}  // namespace

ScalarReadPlan psi_reduce(const MultiIndex& i, const Expr& e) {
  check_full_index(i, e->shape());
  PlanSink sink;
  reduce(*e, i.components(), sink);
  return std::move(sink.plan);
}

double evaluate(const ScalarReadPlan& plan, const Environment& env) {
  std::vector<double> stack;
  for (const auto& step : plan.program) {
    if (step.kind == ScalarReadPlan::Step::Kind::kRead) {
      const auto& r = plan.reads.at(step.read);
      auto it = env.find(r.array_id);
      if (it == env.end()) throw Error(ErrorKind::kEval, "unbound array '" + r.array_id + "'");
      instrumentation::count_scalar_read();
      stack.push_back(it->second.at(r.index));
    } else {
      if (stack.size() < 2) throw Error(ErrorKind::kEval, "malformed read plan");
      const double rhs = stack.back();
      stack.pop_back();
      stack.back() = apply(step.op, stack.back(), rhs);
    }
  }
  if (stack.size() != 1) throw Error(ErrorKind::kEval, "malformed read plan");
  return stack.back();
}

std::string ScalarReadPlan::to_string() const {
  std::vector<std::string> terms;
  std::vector<bool> compound;
  for (const auto& step : program) {
    if (step.kind == Step::Kind::kRead) {
      const auto& r = reads.at(step.read);
      terms.push_back("(" + moa::to_string(r.index) + " psi " + r.array_id + ")");
      compound.push_back(false);
    } else {
      std::string rhs = terms.back();
      const bool rc = compound.back();
      terms.pop_back();
      compound.pop_back();
      std::string lhs = terms.back();
      const bool lc = compound.back();
      terms.back() = (lc ? "(" + lhs + ")" : lhs) + " " + symbol(step.op) + " " +
                     (rc ? "(" + rhs + ")" : rhs);
      compound.back() = true;
    }
  }
  if (terms.empty()) return {};
  // A lone read is printed bare, like the top of a compound term.
  return compound.back() ? terms.back() : terms.back().substr(1, terms.back().size() - 2);
}

double eval_element(const MultiIndex& i, const Expr& e, const Environment& env) {
  check_full_index(i, e->shape());
  EvalSink sink{env, {}};
  reduce(*e, i.components(), sink);
  return sink.stack.back();
}

void check_bindings(const Expr& e, const Environment& env) {
  for (const auto& [id, shape] : leaf_shapes(e)) lookup(env, id, shape);
}

DenseArray materialize(const Expr& e, const Environment& env) {
  check_bindings(e, env);
  const Shape& s = e->shape();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(pi(s)));
  if (pi(s) > 0) {
    std::vector<Extent> i(s.rank(), 0);
    EvalSink sink{env, {}};
    do {
      sink.stack.clear();
      reduce(*e, i, sink);
      out.push_back(sink.stack.back());
    } while (next_index(i, s));
  }
  return DenseArray(s, std::move(out));
}

// -- symbolic DNF ---------------------------------------------------------------

std::vector<std::string> index_names(std::size_t rank) {
  static constexpr std::string_view kLetters = "ijklmnopqrstuvwxyzabcdefgh";
  std::vector<std::string> names;
  for (std::size_t k = 0; k < rank; ++k) {
    std::string n(1, kLetters[k % kLetters.size()]);
    if (k >= kLetters.size()) n += std::to_string(k / kLetters.size() + 1);
    names.push_back(std::move(n));
  }
  return names;
}

namespace {

struct SymbolicTerm {
  std::string text;
  bool compound;
};

SymbolicTerm symbolic(const ExprNode& node, const std::vector<std::string>& names) {
  return std::visit(
      [&](const auto& n) -> SymbolicTerm {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LeafNode>) {
          std::string idx = "<";
          for (std::size_t k = 0; k < names.size(); ++k) idx += (k ? " " : "") + names[k];
          return {"(" + idx + "> psi " + n.id + ")", false};
        } else if constexpr (std::is_same_v<T, OuterNode>) {
          const std::size_t split = n.left->rank();
          std::vector<std::string> ln(names.begin(), names.begin() + static_cast<long>(split));
          std::vector<std::string> rn(names.begin() + static_cast<long>(split), names.end());
          auto l = symbolic(*n.left, ln);
          auto r = symbolic(*n.right, rn);
          return {(l.compound ? "(" + l.text + ")" : l.text) + " " + symbol(n.op) + " " +
                      (r.compound ? "(" + r.text + ")" : r.text),
                  true};
        } else if constexpr (std::is_same_v<T, TransposeNode>) {
          std::vector<std::string> cn(names.size());
          for (std::size_t b = 0; b < cn.size(); ++b) cn[b] = names[static_cast<std::size_t>(n.gather[b])];
          return symbolic(*n.child, cn);
        } else {
          throw Error(ErrorKind::kShape,
                      "symbolic DNF is not defined through reshape or kron; pass a concrete index");
        }
      },
      node.payload());
}

}  // namespace

std::string dnf_symbolic(const Expr& e) {
  const SymbolicTerm t = symbolic(*e, index_names(e->rank()));
  return t.compound ? t.text : t.text.substr(1, t.text.size() - 2);
}

}  // namespace moa
