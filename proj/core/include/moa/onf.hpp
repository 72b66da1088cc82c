// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "moa/dense_array.hpp"
#include "moa/expr.hpp"

namespace moa {

/// sum(coeff * var) + constant
struct AffineExpr {
  struct Term {
    std::string var;
    Extent coeff = 0;
    friend bool operator==(const Term&, const Term&) = default;
  };
  std::vector<Term> terms;
  Extent constant = 0;

  friend bool operator==(const AffineExpr&, const AffineExpr&) = default;
};

struct LoopSpec {
  std::string var;
  Extent start = 0;
  Extent stop = 0;
  Extent stride = 1;
  Extent count = 0;  // ceil((stop - start) / stride)

  friend bool operator==(const LoopSpec&, const LoopSpec&) = default;
};

/// One scalar-op tree node. Nodes are stored children-first; `lhs`/`rhs`
/// index earlier nodes.
struct BodyNode {
  enum class Kind { kRead, kApply };
  Kind kind = Kind::kRead;
  std::string buffer;  // kRead
  AffineExpr offset;   // kRead
  ScalarOp op = ScalarOp::kMul;
  std::size_t lhs = 0;  // kApply
  std::size_t rhs = 0;  // kApply

  friend bool operator==(const BodyNode&, const BodyNode&) = default;
};

struct BodyExpr {
  std::vector<BodyNode> nodes;  // root is nodes.back()
  std::string write_buffer = "out";
  AffineExpr write_offset;

  friend bool operator==(const BodyExpr&, const BodyExpr&) = default;
};

struct BufferDecl {
  std::string id;      // e.g. "avec"
  std::string source;  // array id bound in the environment, e.g. "A"
  Extent length = 0;

  friend bool operator==(const BufferDecl&, const BufferDecl&) = default;
};

/// Operational normal form: a loop nest over flat row-major buffers. When
/// procs > 1 the first loop is the processor loop "p" over [0, procs);
/// each value of p writes one contiguous block of pi(out_shape) / procs
/// outputs.
struct LoopPlan {
  Extent procs = 1;
  Shape out_shape;
  std::vector<BufferDecl> buffers;
  std::vector<LoopSpec> loops;
  BodyExpr body;

  bool has_processor_loop() const noexcept { return procs > 1; }

  friend bool operator==(const LoopPlan&, const LoopPlan&) = default;
};

/// An environment array exposed as its flat row-major buffer.
struct FlatBuffer {
  std::string id;
  std::string source;
  DenseArray data;  // rank 1, shares storage with the source array
};
using BufferSet = std::vector<FlatBuffer>;

/// "A" -> "avec", "Bt" -> "btvec".
std::string buffer_id_for(std::string_view array_id);

/// Every array of the environment as a flat buffer, in id order.
BufferSet flatten_operands(const Environment& env);

/// Lowers e to a loop plan split over `procs` processors. Loop variables are
/// atoms of the output index space, coalesced wherever every access stays
/// contiguous, so all offsets are affine.
///
/// procs must divide the extent of the outermost coalesced loop; otherwise
/// kPartition is thrown listing the valid choices. kLowering is thrown for
/// reshapes whose index map is not affine and for empty outputs.
LoopPlan lower(const Expr& e, Extent procs);

/// Valid processor counts for e (all > 1), ascending.
std::vector<Extent> valid_proc_counts(const Expr& e);

enum class Execution { kSequential, kParallel };

/// Reference interpreter. Partitions run one after another or on one thread
/// each; the output is identical either way. Throws kPlanIntegrity for
/// out-of-range offsets, unbound or short buffers, double writes, or
/// outputs left unwritten.
DenseArray execute_plan(const LoopPlan& plan, const BufferSet& buffers,
                        Execution mode = Execution::kSequential);

/// Write offsets produced by one partition, in execution order. Without a
/// processor loop the only partition is 0.
std::vector<Extent> write_offsets(const LoopPlan& plan, Extent partition);

/// Structural checks shared by serialization and execution.
void validate_plan(const LoopPlan& plan);

std::string plan_to_json(const LoopPlan& plan);
LoopPlan plan_from_json(std::string_view text);

/// Pseudocode rendering, e.g. "out[36*p + 4*q + r] = (avec[p] * bvec[q]) * avec[r]".
std::string body_to_string(const LoopPlan& plan);

}  // namespace moa
