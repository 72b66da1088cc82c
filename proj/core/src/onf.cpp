// SPDX-License-Identifier: Apache-2.0

#include "moa/onf.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <thread>

#include "moa/error.hpp"

namespace moa {

std::string buffer_id_for(std::string_view array_id) {
  std::string id;
  for (char c : array_id) id += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return id + "vec";
}

namespace {

/// Assigns buffer ids in order of first appearance, disambiguating ids that
/// only differ by case in the source name.
class BufferNamer {
 public:
  const std::string& id(const std::string& source) {
    auto it = ids_.find(source);
    if (it != ids_.end()) return it->second;
    std::string base = buffer_id_for(source);
    std::string candidate = base;
    for (int k = 2; taken_.count(candidate); ++k) candidate = base + std::to_string(k);
    taken_.insert(candidate);
    return ids_.emplace(source, candidate).first->second;
  }

 private:
  std::map<std::string, std::string> ids_;
  std::set<std::string> taken_;
};

}  // namespace

BufferSet flatten_operands(const Environment& env) {
  BufferNamer namer;
  BufferSet out;
  for (const auto& [name, array] : env) out.push_back({namer.id(name), name, flatten(array)});
  return out;
}

// -- lowering -----------------------------------------------------------------

namespace {

using AtomList = std::vector<int>;  // most significant first

struct LeafAccess {
  std::string id;
  Shape shape;
  std::vector<AtomList> axes;
};

struct Split {
  int atom;
  Extent outer;
  Extent inner;
};

/// Scalar-op tree over leaf accesses, children first.
struct Skeleton {
  struct Node {
    bool is_read;
    std::size_t access;
    ScalarOp op;
    std::size_t lhs, rhs;
  };
  std::vector<Node> nodes;
};

class AtomRefiner {
 public:
  explicit AtomRefiner(const Shape& out) {
    for (std::size_t a = 0; a < out.rank(); ++a) {
      extents_.push_back(out[a]);
      root_.push_back({static_cast<int>(a)});
    }
  }

  /// Splits atoms until every leaf axis is a mixed-radix combination of
  /// whole atoms.
  void run(const ExprNode& root) {
    for (;;) {
      accesses_.clear();
      skeleton_.nodes.clear();
      std::optional<Split> split = descend(root, root_);
      if (!split) return;
      apply(*split);
    }
  }

  const std::vector<Extent>& extents() const { return extents_; }
  const std::vector<AtomList>& root_axes() const { return root_; }
  const std::vector<LeafAccess>& accesses() const { return accesses_; }
  const Skeleton& skeleton() const { return skeleton_; }

 private:
  std::optional<Split> descend(const ExprNode& node, const std::vector<AtomList>& axes) {
    return std::visit(
        [&](const auto& n) -> std::optional<Split> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LeafNode>) {
            accesses_.push_back({n.id, node.shape(), axes});
            skeleton_.nodes.push_back({true, accesses_.size() - 1, ScalarOp::kMul, 0, 0});
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, OuterNode>) {
            const auto split = static_cast<long>(n.left->rank());
            std::vector<AtomList> l(axes.begin(), axes.begin() + split);
            std::vector<AtomList> r(axes.begin() + split, axes.end());
            if (auto s = descend(*n.left, l)) return s;
            const std::size_t lhs = skeleton_.nodes.size() - 1;
            if (auto s = descend(*n.right, r)) return s;
            const std::size_t rhs = skeleton_.nodes.size() - 1;
            skeleton_.nodes.push_back({false, 0, n.op, lhs, rhs});
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, TransposeNode>) {
            std::vector<AtomList> c(axes.size());
            for (std::size_t b = 0; b < c.size(); ++b) c[b] = axes[static_cast<std::size_t>(n.gather[b])];
            return descend(*n.child, c);
          } else if constexpr (std::is_same_v<T, ReshapeNode>) {
            std::vector<AtomList> c;
            if (auto s = regroup(axes, n.child->shape(), c)) return s;
            return descend(*n.child, c);
          } else {
            return descend(*n.lowered, axes);
          }
        },
        node.payload());
  }

  /// Distributes the row-major atom sequence of `axes` over the axes of
  /// `child`. Returns the split needed when an atom straddles a boundary.
  std::optional<Split> regroup(const std::vector<AtomList>& axes, const Shape& child,
                               std::vector<AtomList>& out) const {
    AtomList flat;
    for (const auto& a : axes) flat.insert(flat.end(), a.begin(), a.end());
    out.assign(child.rank(), {});
    Extent consumed = 1;
    auto k = static_cast<long>(flat.size()) - 1;
    for (std::size_t j = child.rank(); j-- > 0;) {
      const Extent target = consumed * child[j];
      while (consumed < target) {
        const int atom = flat[static_cast<std::size_t>(k)];
        const Extent grown = consumed * extents_[static_cast<std::size_t>(atom)];
        if (target % grown == 0) {
          out[j].insert(out[j].begin(), atom);
          consumed = grown;
          --k;
        } else if (grown % target == 0) {
          return Split{atom, grown / target, target / consumed};
        } else {
          throw Error(ErrorKind::kLowering, "reshape to " + to_string(child) +
                                                " has no affine index map over the enclosing axes");
        }
      }
    }
    // Whatever is left has extent 1 and never moves an offset.
    return std::nullopt;
  }

  void apply(const Split& s) {
    extents_[static_cast<std::size_t>(s.atom)] = s.outer;
    extents_.push_back(s.inner);
    const int fresh = static_cast<int>(extents_.size()) - 1;
    for (auto& axis : root_) {
      auto it = std::find(axis.begin(), axis.end(), s.atom);
      if (it != axis.end()) {
        axis.insert(it + 1, fresh);
        return;
      }
    }
  }

  std::vector<Extent> extents_;
  std::vector<AtomList> root_;
  std::vector<LeafAccess> accesses_;
  Skeleton skeleton_;
};

/// Row-major coefficient of every atom in an index built from `axes` over
/// an array of shape `shape`.
std::map<int, Extent> atom_coefficients(const std::vector<AtomList>& axes, const Shape& shape,
                                        const std::vector<Extent>& extents) {
  std::map<int, Extent> coeff;
  const auto strides = rowmajor_strides(shape);
  for (std::size_t b = 0; b < axes.size(); ++b) {
    Extent c = strides[b];
    for (auto it = axes[b].rbegin(); it != axes[b].rend(); ++it) {
      coeff[*it] = c;
      c *= extents[static_cast<std::size_t>(*it)];
    }
  }
  return coeff;
}

struct Group {
  Extent extent;
  std::vector<Extent> coeff;  // per access, the write last
};

std::string loop_name(std::size_t k, bool processor_split) {
  static constexpr std::string_view kAfterP = "qrstuvwxyzabcdefghijklmno";
  static constexpr std::string_view kPlain = "ijklmnoqrstuvwxyzabcdefgh";
  const std::string_view letters = processor_split ? kAfterP : kPlain;
  std::string n(1, letters[k % letters.size()]);
  if (k >= letters.size()) n += std::to_string(k / letters.size() + 1);
  return n;
}

std::vector<Extent> divisors_above_one(Extent n) {
  std::vector<Extent> d;
  for (Extent k = 2; k <= n; ++k) {
    if (n % k == 0) d.push_back(k);
  }
  return d;
}

struct Coalesced {
  AtomRefiner refiner;
  std::vector<Group> groups;
};

Coalesced coalesce(const Expr& e) {
  const Shape& out = e->shape();
  if (pi(out) == 0) {
    throw Error(ErrorKind::kLowering, "cannot lower an empty output of shape " + to_string(out));
  }
  Coalesced c{AtomRefiner(out), {}};
  c.refiner.run(*e);
  const auto& ext = c.refiner.extents();

  std::vector<std::map<int, Extent>> coeffs;
  for (const auto& acc : c.refiner.accesses()) coeffs.push_back(atom_coefficients(acc.axes, acc.shape, ext));
  coeffs.push_back(atom_coefficients(c.refiner.root_axes(), out, ext));

  for (const auto& axis : c.refiner.root_axes()) {
    for (int atom : axis) {
      const Extent x = ext[static_cast<std::size_t>(atom)];
      if (x == 1) continue;
      std::vector<Extent> col;
      for (const auto& m : coeffs) {
        auto it = m.find(atom);
        col.push_back(it == m.end() ? 0 : it->second);
      }
      if (!c.groups.empty()) {
        Group& g = c.groups.back();
        bool contiguous = true;
        for (std::size_t a = 0; a < col.size(); ++a) contiguous = contiguous && g.coeff[a] == col[a] * x;
        if (contiguous) {
          g.extent *= x;
          g.coeff = col;
          continue;
        }
      }
      c.groups.push_back({x, col});
    }
  }
  if (c.groups.empty()) {
    c.groups.push_back({1, std::vector<Extent>(coeffs.size(), 0)});
  }
  return c;
}

AffineExpr affine(const std::vector<LoopSpec>& loops, const std::vector<Group>& groups,
                  std::size_t access) {
  AffineExpr a;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].coeff[access] != 0) a.terms.push_back({loops[k].var, groups[k].coeff[access]});
  }
  return a;
}

}  // namespace

std::vector<Extent> valid_proc_counts(const Expr& e) {
  return divisors_above_one(coalesce(e).groups.front().extent);
}

LoopPlan lower(const Expr& e, Extent procs) {
  if (procs < 1) {
    throw Error(ErrorKind::kPartition, "processor count must be positive, got " + std::to_string(procs));
  }
  Coalesced c = coalesce(e);
  std::vector<Group> groups = std::move(c.groups);

  if (procs > 1) {
    const Extent lead = groups.front().extent;
    if (lead % procs != 0) {
      std::string valid;
      for (Extent d : divisors_above_one(lead)) valid += (valid.empty() ? "" : ", ") + std::to_string(d);
      throw Error(ErrorKind::kPartition,
                  "cannot split " + to_string(e->shape()) + " over " + std::to_string(procs) +
                      " processors; the outermost contiguous loop has extent " + std::to_string(lead) +
                      ", valid processor counts: {" + valid + "}");
    }
    Group rest = groups.front();
    rest.extent = lead / procs;
    Group proc{procs, rest.coeff};
    for (auto& k : proc.coeff) k *= rest.extent;
    groups.erase(groups.begin());
    if (rest.extent > 1) groups.insert(groups.begin(), rest);
    groups.insert(groups.begin(), proc);
  }

  LoopPlan plan;
  plan.procs = procs;
  plan.out_shape = e->shape();
  for (std::size_t k = 0; k < groups.size(); ++k) {
    std::string var = procs > 1 ? (k == 0 ? "p" : loop_name(k - 1, true)) : loop_name(k, false);
    plan.loops.push_back({std::move(var), 0, groups[k].extent, 1, groups[k].extent});
  }

  const auto& accesses = c.refiner.accesses();
  BufferNamer namer;
  std::map<std::string, std::size_t> declared;
  for (const auto& acc : accesses) {
    if (declared.emplace(acc.id, plan.buffers.size()).second) {
      plan.buffers.push_back({namer.id(acc.id), acc.id, pi(acc.shape)});
    }
  }
  for (const auto& node : c.refiner.skeleton().nodes) {
    BodyNode b;
    if (node.is_read) {
      b.kind = BodyNode::Kind::kRead;
      b.buffer = plan.buffers[declared.at(accesses[node.access].id)].id;
      b.offset = affine(plan.loops, groups, node.access);
    } else {
      b.kind = BodyNode::Kind::kApply;
      b.op = node.op;
      b.lhs = node.lhs;
      b.rhs = node.rhs;
    }
    plan.body.nodes.push_back(std::move(b));
  }
  plan.body.write_offset = affine(plan.loops, groups, accesses.size());
  validate_plan(plan);
  return plan;
}

// -- validation and execution ---------------------------------------------------

void validate_plan(const LoopPlan& plan) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::kPlanIntegrity, m); };
  if (plan.loops.empty()) fail("plan has no loops");
  if (plan.procs < 1) fail("plan processor count must be positive");
  std::set<std::string> vars;
  Extent total = 1;
  for (const auto& l : plan.loops) {
    if (!vars.insert(l.var).second) fail("loop variable '" + l.var + "' declared twice");
    if (l.stride < 1 || l.start < 0 || l.stop <= l.start) fail("loop '" + l.var + "' has an empty or invalid range");
    if (l.count != (l.stop - l.start + l.stride - 1) / l.stride) fail("loop '" + l.var + "' count disagrees with its bounds");
    total *= l.count;
  }
  if (total != pi(plan.out_shape)) {
    fail("loop counts cover " + std::to_string(total) + " iterations but the output has " +
         std::to_string(pi(plan.out_shape)) + " elements");
  }
  if (plan.has_processor_loop() && (plan.loops.front().var != "p" || plan.loops.front().count != plan.procs)) {
    fail("first loop must be the processor loop p over [0, " + std::to_string(plan.procs) + ")");
  }
  std::set<std::string> buffers;
  for (const auto& b : plan.buffers) {
    if (!buffers.insert(b.id).second) fail("buffer '" + b.id + "' declared twice");
  }
  auto check_affine = [&](const AffineExpr& a) {
    for (const auto& t : a.terms) {
      if (!vars.count(t.var)) fail("offset uses undeclared loop variable '" + t.var + "'");
    }
  };
  const auto& nodes = plan.body.nodes;
  if (nodes.empty()) fail("plan body is empty");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& n = nodes[k];
    if (n.kind == BodyNode::Kind::kRead) {
      if (!buffers.count(n.buffer)) fail("body reads undeclared buffer '" + n.buffer + "'");
      check_affine(n.offset);
    } else if (n.lhs >= k || n.rhs >= k) {
      fail("body node " + std::to_string(k) + " refers forward");
    }
  }
  check_affine(plan.body.write_offset);
}

namespace {

struct CompiledAffine {
  std::vector<Extent> coeff;  // per loop position
  Extent constant;

  Extent at(const std::vector<Extent>& values) const {
    Extent v = constant;
    for (std::size_t k = 0; k < values.size(); ++k) v += coeff[k] * values[k];
    return v;
  }
};

struct CompiledNode {
  bool is_read;
  const double* data;
  Extent length;
  CompiledAffine offset;
  ScalarOp op;
  std::size_t lhs, rhs;
};

struct CompiledPlan {
  std::vector<LoopSpec> loops;
  std::vector<CompiledNode> nodes;
  CompiledAffine write;
  Extent out_size;
  Extent partitions;
};

CompiledAffine compile(const AffineExpr& a, const std::vector<LoopSpec>& loops) {
  CompiledAffine c{std::vector<Extent>(loops.size(), 0), a.constant};
  for (const auto& t : a.terms) {
    for (std::size_t k = 0; k < loops.size(); ++k) {
      if (loops[k].var == t.var) c.coeff[k] += t.coeff;
    }
  }
  return c;
}

CompiledPlan compile(const LoopPlan& plan, const BufferSet* buffers) {
  validate_plan(plan);
  CompiledPlan c;
  c.loops = plan.loops;
  c.out_size = pi(plan.out_shape);
  c.partitions = plan.has_processor_loop() ? plan.procs : 1;
  c.write = compile(plan.body.write_offset, plan.loops);
  for (const auto& n : plan.body.nodes) {
    CompiledNode cn{n.kind == BodyNode::Kind::kRead, nullptr, 0, {}, n.op, n.lhs, n.rhs};
    if (cn.is_read) {
      cn.offset = compile(n.offset, plan.loops);
      if (buffers) {
        auto decl = std::find_if(plan.buffers.begin(), plan.buffers.end(),
                                 [&](const BufferDecl& d) { return d.id == n.buffer; });
        auto buf = std::find_if(buffers->begin(), buffers->end(),
                                [&](const FlatBuffer& b) { return b.source == decl->source; });
        if (buf == buffers->end()) {
          throw Error(ErrorKind::kPlanIntegrity, "no buffer bound for array '" + decl->source + "'");
        }
        if (buf->data.size() != decl->length) {
          throw Error(ErrorKind::kPlanIntegrity,
                      "buffer '" + decl->id + "' has " + std::to_string(buf->data.size()) +
                          " elements, plan expects " + std::to_string(decl->length));
        }
        cn.data = buf->data.data().data();
        cn.length = buf->data.size();
      }
    }
    c.nodes.push_back(std::move(cn));
  }
  return c;
}

/// Calls fn(values) for every iteration of partition `part`.
template <typename Fn>
void for_each_iteration(const CompiledPlan& c, Extent part, Fn&& fn) {
  const std::size_t first = c.partitions > 1 ? 1 : 0;
  std::vector<Extent> t(c.loops.size(), 0);
  std::vector<Extent> values(c.loops.size());
  if (first == 1) t[0] = part;
  for (;;) {
    for (std::size_t k = 0; k < t.size(); ++k) values[k] = c.loops[k].start + t[k] * c.loops[k].stride;
    fn(values);
    bool advanced = false;
    for (std::size_t k = t.size(); k > first && !advanced;) {
      --k;
      if (++t[k] < c.loops[k].count) {
        advanced = true;
      } else {
        t[k] = 0;
      }
    }
    if (!advanced) return;
  }
}

void run_partition(const CompiledPlan& c, Extent part, std::vector<double>& out,
                   std::vector<std::atomic<unsigned char>>& written) {
  std::vector<double> stack(c.nodes.size());
  for_each_iteration(c, part, [&](const std::vector<Extent>& v) {
    for (std::size_t k = 0; k < c.nodes.size(); ++k) {
      const auto& n = c.nodes[k];
      if (n.is_read) {
        const Extent off = n.offset.at(v);
        if (off < 0 || off >= n.length) {
          throw Error(ErrorKind::kPlanIntegrity, "read offset " + std::to_string(off) +
                                                     " outside buffer of length " + std::to_string(n.length));
        }
        stack[k] = n.data[off];
      } else {
        stack[k] = apply(n.op, stack[n.lhs], stack[n.rhs]);
      }
    }
    const Extent w = c.write.at(v);
    if (w < 0 || w >= c.out_size) {
      throw Error(ErrorKind::kPlanIntegrity, "write offset " + std::to_string(w) +
                                                 " outside output of " + std::to_string(c.out_size));
    }
    if (written[static_cast<std::size_t>(w)].exchange(1) != 0) {
      throw Error(ErrorKind::kPlanIntegrity, "output offset " + std::to_string(w) + " written twice");
    }
    out[static_cast<std::size_t>(w)] = stack.back();
  });
}

}  // namespace

DenseArray execute_plan(const LoopPlan& plan, const BufferSet& buffers, Execution mode) {
  const CompiledPlan c = compile(plan, &buffers);
  std::vector<double> out(static_cast<std::size_t>(c.out_size), 0.0);
  std::vector<std::atomic<unsigned char>> written(out.size());

  if (mode == Execution::kParallel && c.partitions > 1) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(c.partitions));
    std::vector<std::thread> workers;
    for (Extent p = 0; p < c.partitions; ++p) {
      workers.emplace_back([&, p] {
        try {
          run_partition(c, p, out, written);
        } catch (...) {
          errors[static_cast<std::size_t>(p)] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (Extent p = 0; p < c.partitions; ++p) run_partition(c, p, out, written);
  }

  for (std::size_t k = 0; k < written.size(); ++k) {
    if (!written[k].load()) {
      throw Error(ErrorKind::kPlanIntegrity, "output offset " + std::to_string(k) + " never written");
    }
  }
  return DenseArray(plan.out_shape, std::move(out));
}

std::vector<Extent> write_offsets(const LoopPlan& plan, Extent partition) {
  const CompiledPlan c = compile(plan, nullptr);
  if (partition < 0 || partition >= c.partitions) {
    throw Error(ErrorKind::kRange, "partition " + std::to_string(partition) + " outside [0, " +
                                       std::to_string(c.partitions) + ")");
  }
  std::vector<Extent> offsets;
  for_each_iteration(c, partition, [&](const std::vector<Extent>& v) { offsets.push_back(c.write.at(v)); });
  return offsets;
}

// -- JSON -------------------------------------------------------------------------

namespace {

using ojson = nlohmann::ordered_json;

ojson affine_json(const AffineExpr& a) {
  ojson terms = ojson::array();
  for (const auto& t : a.terms) terms.push_back({{"var", t.var}, {"coeff", t.coeff}});
  return {{"terms", terms}, {"const", a.constant}};
}

ojson node_json(const std::vector<BodyNode>& nodes, std::size_t k) {
  const auto& n = nodes[k];
  if (n.kind == BodyNode::Kind::kRead) return {{"buffer", n.buffer}, {"offset", affine_json(n.offset)}};
  return {{"op", to_string(n.op)}, {"args", {node_json(nodes, n.lhs), node_json(nodes, n.rhs)}}};
}

[[noreturn]] void bad_plan(const std::string& m) { throw Error(ErrorKind::kParse, "plan JSON: " + m); }

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_plan(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Extent int_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) bad_plan(std::string("field \"") + key + "\" must be an integer");
  return v.get<Extent>();
}

std::string str_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) bad_plan(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

AffineExpr affine_from(const nlohmann::json& j) {
  AffineExpr a;
  const auto& terms = field(j, "terms");
  if (!terms.is_array()) bad_plan("offset terms must be an array");
  for (const auto& t : terms) a.terms.push_back({str_field(t, "var"), int_field(t, "coeff")});
  a.constant = int_field(j, "const");
  return a;
}

std::size_t node_from(const nlohmann::json& j, std::vector<BodyNode>& nodes) {
  BodyNode n;
  if (j.is_object() && j.contains("buffer")) {
    n.kind = BodyNode::Kind::kRead;
    n.buffer = str_field(j, "buffer");
    n.offset = affine_from(field(j, "offset"));
  } else {
    const auto& args = field(j, "args");
    if (!args.is_array() || args.size() != 2) bad_plan("\"args\" must hold two operands");
    n.kind = BodyNode::Kind::kApply;
    try {
      n.op = scalar_op_from_string(str_field(j, "op"));
    } catch (const Error& e) {
      bad_plan(e.what());
    }
    n.lhs = node_from(args[0], nodes);
    n.rhs = node_from(args[1], nodes);
  }
  nodes.push_back(std::move(n));
  return nodes.size() - 1;
}

}  // namespace

std::string plan_to_json(const LoopPlan& plan) {
  validate_plan(plan);
  ojson j;
  j["procs"] = plan.procs;
  j["out_shape"] = plan.out_shape.vec();
  ojson buffers = ojson::array();
  for (const auto& b : plan.buffers) buffers.push_back({{"id", b.id}, {"source", b.source}, {"length", b.length}});
  j["buffers"] = buffers;
  ojson loops = ojson::array();
  for (const auto& l : plan.loops) {
    loops.push_back({{"var", l.var}, {"start", l.start}, {"stop", l.stop}, {"stride", l.stride}, {"count", l.count}});
  }
  j["loops"] = loops;
  j["body"] = node_json(plan.body.nodes, plan.body.nodes.size() - 1);
  j["write"] = {{"buffer", plan.body.write_buffer}, {"offset", affine_json(plan.body.write_offset)}};
  return j.dump(2);
}

LoopPlan plan_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad_plan(e.what());
  }
  LoopPlan plan;
  plan.procs = int_field(j, "procs");
  const auto& shape = field(j, "out_shape");
  if (!shape.is_array()) bad_plan("\"out_shape\" must be an array");
  std::vector<Extent> extents;
  for (const auto& e : shape) {
    if (!e.is_number_integer()) bad_plan("\"out_shape\" entries must be integers");
    extents.push_back(e.get<Extent>());
  }
  plan.out_shape = Shape(std::move(extents));
  const auto& buffers = field(j, "buffers");
  if (!buffers.is_array()) bad_plan("\"buffers\" must be an array");
  for (const auto& b : buffers) plan.buffers.push_back({str_field(b, "id"), str_field(b, "source"), int_field(b, "length")});
  const auto& loops = field(j, "loops");
  if (!loops.is_array()) bad_plan("\"loops\" must be an array");
  for (const auto& l : loops) {
    plan.loops.push_back({str_field(l, "var"), int_field(l, "start"), int_field(l, "stop"),
                          int_field(l, "stride"), int_field(l, "count")});
  }
  node_from(field(j, "body"), plan.body.nodes);
  const auto& write = field(j, "write");
  plan.body.write_buffer = str_field(write, "buffer");
  plan.body.write_offset = affine_from(field(write, "offset"));
  validate_plan(plan);
  return plan;
}

namespace {

std::string affine_text(const AffineExpr& a) {
  std::string s;
  for (const auto& t : a.terms) {
    if (!s.empty()) s += " + ";
    s += t.coeff == 1 ? t.var : std::to_string(t.coeff) + "*" + t.var;
  }
  if (a.constant != 0 || s.empty()) s += (s.empty() ? "" : " + ") + std::to_string(a.constant);
  return s;
}

std::string node_text(const std::vector<BodyNode>& nodes, std::size_t k, bool nested) {
  const auto& n = nodes[k];
  if (n.kind == BodyNode::Kind::kRead) return n.buffer + "[" + affine_text(n.offset) + "]";
  std::string s = node_text(nodes, n.lhs, true) + " " + symbol(n.op) + " " + node_text(nodes, n.rhs, true);
  return nested ? "(" + s + ")" : s;
}

}  // namespace

std::string body_to_string(const LoopPlan& plan) {
  return plan.body.write_buffer + "[" + affine_text(plan.body.write_offset) +
         "] = " + node_text(plan.body.nodes, plan.body.nodes.size() - 1, false);
}

}  // namespace moa
