// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moa/dense_array.hpp"
#include "moa/shape.hpp"

namespace moa {

enum class ScalarOp { kMul, kAdd, kSub, kDiv };

/// "mul", "add", "sub", "div"
const char* to_string(ScalarOp op);
/// "*", "+", "-", "/"
const char* symbol(ScalarOp op);
/// Inverse of to_string; throws kParse.
ScalarOp scalar_op_from_string(std::string_view name);

/// Throws kEval on division by zero.
double apply(ScalarOp op, double lhs, double rhs);

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct LeafNode {
  std::string id;
};

struct OuterNode {
  ScalarOp op;
  Expr left;
  Expr right;
};

struct TransposeNode {
  AxisPermutation perm;
  std::vector<Extent> gather;  // gradeup(perm): child component b = i[gather[b]]
  Expr child;
};

/// Target shape is the node's own shape.
struct ReshapeNode {
  Expr child;
};

/// Kronecker sugar over two rank-2 children; `lowered` is the equivalent
/// reshaped, transposed outer product every pass works on.
struct KronNode {
  Expr left;
  Expr right;
  Expr lowered;
};

/// Immutable DAG node with its inferred shape. Construct through the free
/// functions below; construction fails if the shape is ill-defined.
class ExprNode {
 public:
  using Payload = std::variant<LeafNode, OuterNode, TransposeNode, ReshapeNode, KronNode>;

  ExprNode(Shape shape, Payload payload) : shape_(std::move(shape)), payload_(std::move(payload)) {}

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.rank(); }
  const Payload& payload() const noexcept { return payload_; }

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&payload_);
  }

 private:
  Shape shape_;
  Payload payload_;
};

Expr leaf(std::string id, Shape shape);
Expr outer(ScalarOp op, Expr left, Expr right);
Expr transpose(AxisPermutation t, Expr child);
Expr reshape(Shape s, Expr child);
/// Both children must be rank 2 (kShape otherwise).
Expr kron(Expr left, Expr right);

/// The shape fixed at construction: leaf shape, concatenation for outer,
/// child.shape[t] for transpose, the target for reshape, <m*p n*q> for kron.
Shape infer_shape(const Expr& e);

/// Number of leaf occurrences along every path (a shared subexpression
/// counts once per use).
std::size_t leaf_occurrences(const Expr& e);

/// Distinct leaf ids with their shapes.
std::map<std::string, Shape> leaf_shapes(const Expr& e);

/// Text form accepted by parse_expression.
std::string to_text(const Expr& e);

/// The denotational normal form of one element: the leaf reads it depends on
/// and the scalar-op tree combining them, in postfix order.
struct ScalarReadPlan {
  struct Read {
    std::string array_id;
    MultiIndex index;
    friend bool operator==(const Read&, const Read&) = default;
  };
  struct Step {
    enum class Kind { kRead, kApply };
    Kind kind;
    std::size_t read = 0;          // kRead: position in `reads`
    ScalarOp op = ScalarOp::kMul;  // kApply: combines the two previous values
    friend bool operator==(const Step&, const Step&) = default;
  };

  std::vector<Read> reads;
  std::vector<Step> program;

  /// e.g. "((<0 0> psi A) * (<1 2> psi B)) * (<0 1> psi A)"
  std::string to_string() const;

  friend bool operator==(const ScalarReadPlan&, const ScalarReadPlan&) = default;
};

using Environment = std::map<std::string, DenseArray, std::less<>>;

/// Rewrites i psi e down to leaf reads. Throws kIndex if i is not a full
/// valid index for infer_shape(e).
ScalarReadPlan psi_reduce(const MultiIndex& i, const Expr& e);

/// Executes a read plan. Throws kEval for unbound ids or division by zero.
double evaluate(const ScalarReadPlan& plan, const Environment& env);

/// i psi e computed by index rewriting. Performs one scalar read per leaf
/// occurrence and creates no DenseArray.
double eval_element(const MultiIndex& i, const Expr& e, const Environment& env);

/// All of e, one eval_element per index.
DenseArray materialize(const Expr& e, const Environment& env);

/// Symbolic DNF over index names i, j, k, ... of the output, e.g.
/// "((<i j> psi A) * (<k l> psi B)) * (<m n> psi A)". Only defined for
/// expressions without reshape (kron included); throws kShape otherwise.
std::string dnf_symbolic(const Expr& e);

/// Names used by dnf_symbolic for the output axes.
std::vector<std::string> index_names(std::size_t rank);

/// Throws unless every leaf is bound to an array of the leaf's shape.
void check_bindings(const Expr& e, const Environment& env);

}  // namespace moa
