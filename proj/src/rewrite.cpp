// Copyright 2026 The lazyla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "lazyla/rewrite.hpp"

#include <algorithm>
#include <limits>

#include "lazyla/error.hpp"
#include "lazyla/trace.hpp"

namespace lazyla {

SolverChoice choose_solver(const StructureInfo& info, std::size_t n) {
  const std::size_t band_limit = std::max<std::size_t>(4, n / 4);
  SolverChoice c;
  if (info.lower_bandwidth + info.upper_bandwidth <= band_limit) {
    c.kernel = KernelId::band_solve;
    c.kl = info.lower_bandwidth;
    c.ku = info.upper_bandwidth;
    c.tag = "BAND";
  } else if (info.is_upper_triangular) {
    c.kernel = KernelId::triangular_solve;
    c.upper = true;
    c.tag = "TRIU";
  } else if (info.is_lower_triangular) {
    c.kernel = KernelId::triangular_solve;
    c.tag = "TRIL";
  } else if (info.is_symmetric) {
    c.tag = "SYM-DETECTED";
  } else {
    c.tag = "LU";
  }
  return c;
}

SolverChoice dispatch_solver(const MatrixView& a) {
  const std::size_t n = a.n_rows();
  if (a.n_cols() != n) {
    throw ConformanceError("Solve: coefficient shape " +
                               std::to_string(n) + "x" +
                               std::to_string(a.n_cols()) + " is not square",
                           "solve");
  }
  const StructureInfo info = analyze_structure(a);
  const SolverChoice c = choose_solver(info, n);
  if (!instrument::active()) return c;

  auto verdict = [&](const char* tag) {
    return c.tag == tag ? std::string("yes") : std::string("no");
  };
  instrument::detect("SQUARE", std::to_string(n) + "x" + std::to_string(n));
  instrument::detect("BAND", "kl=" + std::to_string(info.lower_bandwidth) +
                                 ", ku=" +
                                 std::to_string(info.upper_bandwidth) + ", " +
                                 verdict("BAND"));
  if (c.tag == "BAND") return c;
  instrument::detect("TRIU", verdict("TRIU"));
  if (c.tag == "TRIU") return c;
  instrument::detect("TRIL", verdict("TRIL"));
  if (c.tag == "TRIL") return c;
  instrument::detect("SYM", verdict("SYM-DETECTED"));
  return c;
}

std::vector<std::size_t> greedy_chain_order(std::span<const Shape> shapes,
                                            std::size_t keep) {
  std::vector<Shape> cur(shapes.begin(), shapes.end());
  std::vector<std::size_t> order;
  keep = std::max<std::size_t>(keep, 1);
  while (cur.size() > keep) {
    std::size_t best = 0;
    std::size_t best_elems = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const std::size_t elems = cur[i].n_rows * cur[i + 1].n_cols;
      if (elems < best_elems) {
        best = i;
        best_elems = elems;
      }
    }
    order.push_back(best);
    cur[best] = {cur[best].n_rows, cur[best + 1].n_cols, false};
    cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  return order;
}

std::uint64_t chain_cost(std::span<const Shape> shapes,
                         std::span<const std::size_t> order) {
  std::vector<Shape> cur(shapes.begin(), shapes.end());
  std::uint64_t cost = 0;
  for (std::size_t i : order) {
    if (i + 1 >= cur.size()) throw UsageError("merge index out of range");
    cost += static_cast<std::uint64_t>(cur[i].n_rows) * cur[i].n_cols *
            cur[i + 1].n_cols;
    cur[i] = {cur[i].n_rows, cur[i + 1].n_cols, false};
    cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  }
  return cost;
}

namespace {

void collect_factors(const ExprNode& node,
                     std::vector<const ExprNode*>& out) {
  if (node.kind() == NodeKind::MatMul) {
    collect_factors(node.child(0), out);
    collect_factors(node.child(1), out);
  } else {
    out.push_back(&node);
  }
}

bool is_square_product(const ExprNode& matmul) {
  const Shape s = infer_shape(matmul);
  return s.n_rows == s.n_cols;
}

}  // namespace

OperandRef PlanBuilder::emit(KernelCall call) {
  call.out_slot = plan_.slot_count++;
  const Shape s = call.out_shape;
  plan_.steps.push_back(std::move(call));
  return OperandRef::of_slot(plan_.steps.back().out_slot, s.n_rows, s.n_cols);
}

void PlanBuilder::log_rule(std::string rule) {
  instrument::rule(rule);
  plan_.rule_log.push_back(std::move(rule));
}

Plan PlanBuilder::finish(const OperandRef& result, const Shape& shape) {
  bool whole = false;
  if (result.is_whole_slot()) {
    for (const auto& s : plan_.steps) {
      if (s.out_slot == result.slot) {
        whole = s.out_shape.n_rows == result.region_rows &&
                s.out_shape.n_cols == result.region_cols;
      }
    }
  }
  OperandRef out = result;
  if (!whole) {
    KernelCall copy;
    copy.kernel = KernelId::fused_axpby_n;
    copy.operands = {result};
    copy.coeffs = {1.0};
    copy.out_shape = result.shape();
    out = emit(std::move(copy));
  }
  plan_.result_slot = out.slot;
  plan_.output_shape = shape;
  if (plan_.rule_log.empty()) plan_.rule_log.push_back("NONE");
  return std::move(plan_);
}

OperandRef PlanBuilder::lower(const ExprNode& node) {
  switch (node.kind()) {
    case NodeKind::Leaf:
      return OperandRef::of_leaf(node.matrix());
    case NodeKind::Transpose:
    case NodeKind::ColView:
    case NodeKind::RowView:
      return *fold_view(node);
    case NodeKind::ScalarMul:
    case NodeKind::Add:
    case NodeKind::Sub:
      return *fuse_elementwise(node);
    case NodeKind::MatMul: {
      auto chain = flatten_chain(node);
      reduce_chain(chain, 1);
      return materialise(chain.front());
    }
    case NodeKind::DiagMat: {
      if (auto r = diag_of_product(node)) return *r;
      KernelCall call;
      call.kernel = KernelId::diag_materialise;
      call.operands = {lower(node.child(0))};
      call.out_shape = infer_shape(node);
      return emit(std::move(call));
    }
    case NodeKind::Trace: {
      if (auto r = trace_of_product(node)) return *r;
      KernelCall call;
      call.kernel = KernelId::diag_sum;
      call.operands = {lower(node.child(0))};
      call.out_shape = {1, 1, true};
      return emit(std::move(call));
    }
    case NodeKind::AsScalar:
      if (auto r = scalar_triple(node)) return *r;
      return lower(node.child(0));
    case NodeKind::Inverse: {
      KernelCall call;
      call.kernel = KernelId::explicit_inverse;
      call.operands = {lower(node.child(0))};
      call.out_shape = infer_shape(node);
      return emit(std::move(call));
    }
    case NodeKind::Solve: {
      const OperandRef a = lower(node.child(0));
      const OperandRef b = lower(node.child(1));
      return structured_solve(a, b);
    }
  }
  throw UsageError("unknown node kind");
}

std::optional<OperandRef> PlanBuilder::fold_view(const ExprNode& node) {
  switch (node.kind()) {
    case NodeKind::Transpose:
      return lower(node.child(0)).t();
    case NodeKind::ColView:
      return lower(node.child(0)).col(node.index());
    case NodeKind::RowView:
      return lower(node.child(0)).row(node.index());
    default:
      return std::nullopt;
  }
}

std::optional<OperandRef> PlanBuilder::fuse_elementwise(const ExprNode& node) {
  switch (node.kind()) {
    case NodeKind::Leaf:
    case NodeKind::ScalarMul:
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Transpose:
    case NodeKind::ColView:
    case NodeKind::RowView:
      break;
    default:
      return std::nullopt;
  }

  KernelCall call;
  call.kernel = KernelId::fused_axpby_n;
  bool arithmetic = false;
  bool folded = false;
  auto collect = [&](auto& self, const ExprNode& n, double coeff) -> void {
    switch (n.kind()) {
      case NodeKind::Add:
      case NodeKind::Sub:
        arithmetic = true;
        self(self, n.child(0), coeff);
        self(self, n.child(1), n.kind() == NodeKind::Add ? coeff : -coeff);
        return;
      case NodeKind::ScalarMul:
        arithmetic = true;
        self(self, n.child(0), coeff * n.scalar());
        return;
      case NodeKind::Transpose:
      case NodeKind::ColView:
      case NodeKind::RowView:
        folded = true;
        call.operands.push_back(*fold_view(n));
        call.coeffs.push_back(coeff);
        return;
      default:
        call.operands.push_back(lower(n));
        call.coeffs.push_back(coeff);
        return;
    }
  };
  collect(collect, node, 1.0);

  if (arithmetic) log_rule("R1");
  if (folded) log_rule("R2");
  call.out_shape = call.operands.front().shape();
  return emit(std::move(call));
}

std::vector<ChainFactor> PlanBuilder::flatten_chain(const ExprNode& node) {
  std::vector<const ExprNode*> nodes;
  collect_factors(node, nodes);
  std::vector<ChainFactor> chain;
  chain.reserve(nodes.size());
  for (const ExprNode* n : nodes) {
    ChainFactor f;
    f.shape = infer_shape(*n);
    f.shape.is_scalar = false;
    switch (n->kind()) {
      case NodeKind::DiagMat:
        f.kind = ChainFactor::Kind::diag;
        f.operand = lower(n->child(0));
        break;
      case NodeKind::Inverse:
        f.kind = ChainFactor::Kind::inverse;
        f.operand = lower(n->child(0));
        break;
      default:
        f.kind = ChainFactor::Kind::dense;
        f.operand = lower(*n);
        break;
    }
    chain.push_back(f);
  }
  return chain;
}

void PlanBuilder::reduce_chain(std::vector<ChainFactor>& chain,
                               std::size_t keep) {
  if (chain.size() <= keep) return;
  std::vector<Shape> shapes;
  shapes.reserve(chain.size());
  for (const auto& f : chain) shapes.push_back(f.shape);
  const auto order = greedy_chain_order(shapes, keep);
  if (chain.size() >= 3) log_rule("R6");
  for (std::size_t i : order) {
    chain[i] = multiply_pair(chain[i], chain[i + 1]);
    chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  }
}

OperandRef PlanBuilder::materialise(const ChainFactor& f) {
  if (f.kind == ChainFactor::Kind::dense) return f.operand;
  KernelCall call;
  call.kernel = f.kind == ChainFactor::Kind::diag ? KernelId::diag_materialise
                                                  : KernelId::explicit_inverse;
  call.operands = {f.operand};
  call.out_shape = f.shape;
  return emit(std::move(call));
}

ChainFactor PlanBuilder::multiply_pair(const ChainFactor& left_in,
                                       const ChainFactor& right_in) {
  using Kind = ChainFactor::Kind;
  ChainFactor left = left_in;
  ChainFactor right = right_in;
  const Shape out_shape{left.shape.n_rows, right.shape.n_cols, false};
  auto dense = [](OperandRef op, Shape s) {
    return ChainFactor{Kind::dense, op, s};
  };

  if (left.kind == Kind::inverse) {
    const OperandRef b = materialise(right);
    log_rule("R9");
    return dense(structured_solve(left.operand, b), out_shape);
  }
  if (right.kind == Kind::inverse ||
      (right.kind == Kind::diag && left.kind == Kind::diag)) {
    right = dense(materialise(right), right.shape);
  }

  KernelCall call;
  call.out_shape = out_shape;
  if (left.kind == Kind::diag) {
    log_rule("R3");
    call.kernel = KernelId::diag_scale;
    call.side = Side::left;
    call.operands = {left.operand, right.operand};
    return dense(emit(std::move(call)), out_shape);
  }
  if (right.kind == Kind::diag) {
    log_rule("R3");
    call.kernel = KernelId::diag_scale;
    call.side = Side::right;
    call.operands = {right.operand, left.operand};
    return dense(emit(std::move(call)), out_shape);
  }

  const OperandRef& a = left.operand;
  const OperandRef& b = right.operand;
  if (a.same_storage_region(b) && a.transposed != b.transposed) {
    log_rule("R8");
    call.kernel = KernelId::syrk;
    call.operands = {a};
    return dense(emit(std::move(call)), out_shape);
  }
  if (out_shape.n_cols == 1) {
    call.kernel = KernelId::gemv;
    call.trans_a = a.transposed;
    call.operands = {a.untransposed(), b};
  } else {
    call.kernel = KernelId::gemm;
    call.trans_a = a.transposed;
    call.trans_b = b.transposed;
    call.operands = {a.untransposed(), b.untransposed()};
  }
  return dense(emit(std::move(call)), out_shape);
}

std::optional<OperandRef> PlanBuilder::diag_of_product(const ExprNode& node) {
  if (node.kind() != NodeKind::DiagMat ||
      node.child(0).kind() != NodeKind::MatMul ||
      !is_square_product(node.child(0))) {
    return std::nullopt;
  }
  auto chain = flatten_chain(node.child(0));
  reduce_chain(chain, 2);
  const Shape out_shape = infer_shape(node);
  KernelCall call;
  call.out_shape = out_shape;
  if (chain[0].kind == ChainFactor::Kind::dense &&
      chain[1].kind == ChainFactor::Kind::dense) {
    log_rule("R4");
    call.kernel = KernelId::diag_of_product;
    call.operands = {chain[0].operand, chain[1].operand};
  } else {
    reduce_chain(chain, 1);
    call.kernel = KernelId::diag_materialise;
    call.operands = {materialise(chain[0])};
  }
  return emit(std::move(call));
}

std::optional<OperandRef> PlanBuilder::trace_of_product(const ExprNode& node) {
  if (node.kind() != NodeKind::Trace ||
      node.child(0).kind() != NodeKind::MatMul) {
    return std::nullopt;
  }
  auto chain = flatten_chain(node.child(0));
  reduce_chain(chain, 2);
  KernelCall call;
  call.out_shape = {1, 1, true};
  if (chain[0].kind == ChainFactor::Kind::dense &&
      chain[1].kind == ChainFactor::Kind::dense) {
    log_rule("R5");
    call.kernel = KernelId::trace_of_product;
    call.operands = {chain[0].operand, chain[1].operand};
  } else {
    reduce_chain(chain, 1);
    call.kernel = KernelId::diag_sum;
    call.operands = {materialise(chain[0])};
  }
  return emit(std::move(call));
}

std::optional<OperandRef> PlanBuilder::scalar_triple(const ExprNode& node) {
  if (node.kind() != NodeKind::AsScalar ||
      node.child(0).kind() != NodeKind::MatMul) {
    return std::nullopt;
  }
  std::vector<const ExprNode*> f;
  collect_factors(node.child(0), f);
  if (f.size() != 3 || f[1]->kind() != NodeKind::DiagMat) return std::nullopt;
  const Shape first = infer_shape(*f[0]);
  const Shape mid = infer_shape(*f[1]);
  const Shape last = infer_shape(*f[2]);
  const std::size_t n = mid.n_rows;
  if (first.n_rows != 1 || first.n_cols != n || last.n_rows != n ||
      last.n_cols != 1) {
    return std::nullopt;
  }
  log_rule("R7");
  KernelCall call;
  call.kernel = KernelId::triple_diag_dot;
  call.operands = {lower(*f[0]), lower(f[1]->child(0)), lower(*f[2])};
  call.out_shape = {1, 1, true};
  return emit(std::move(call));
}

OperandRef PlanBuilder::structured_solve(const OperandRef& a,
                                         const OperandRef& b) {
  KernelCall call;
  call.operands = {a, b};
  call.out_shape = {a.n_rows(), b.n_cols(), false};
  if (a.source == OperandRef::Source::leaf) {
    const MatrixView view(*a.leaf, a.row_offset, a.col_offset, a.region_rows,
                          a.region_cols, a.transposed);
    const SolverChoice c = dispatch_solver(view);
    log_rule("R10:" + c.tag);
    call.kernel = c.kernel;
    call.kl = c.kl;
    call.ku = c.ku;
    call.upper = c.upper;
  } else {
    log_rule("R10:RUNTIME");
    call.kernel = KernelId::lu_solve;
    call.runtime_dispatch = true;
  }
  return emit(std::move(call));
}

Plan rewrite(const ExprNode& node) {
  const Shape shape = infer_shape(node);
  PlanBuilder builder;
  auto fused = builder.fuse_elementwise(node);
  const OperandRef result = fused ? *fused : builder.lower(node);
  return builder.finish(result, shape);
}

DenseMatrix evaluate(const ExprNode& node) { return execute(rewrite(node)); }

}  // namespace lazyla
