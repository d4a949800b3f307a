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


#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lazyla/expr.hpp"
#include "lazyla/plan.hpp"
#include "lazyla/structure.hpp"

namespace lazyla {

/// Solver picked by the structured-solve ladder.
struct SolverChoice {
  KernelId kernel = KernelId::lu_solve;
  std::size_t kl = 0;
  std::size_t ku = 0;
  bool upper = false;
  /// BAND, TRIU, TRIL, SYM-DETECTED or LU.
  std::string tag;
};

/// Ladder over the structure of a square coefficient matrix: banded
/// (kl + ku <= max(4, n/4)), then upper/lower triangular, then symmetric
/// (solved by LU, tagged SYM-DETECTED), then general LU.
SolverChoice choose_solver(const StructureInfo& info, std::size_t n);

/// Analyses `a`, reports each ladder check as a detect event and returns the
/// choice.
SolverChoice dispatch_solver(const MatrixView& a);

/// Greedy matrix-chain ordering: repeatedly multiply the adjacent pair whose
/// product has the fewest elements, leftmost on ties. Entry s of the result
/// is the index of the left factor merged at step s, counted in the list as
/// it stands after the earlier merges. Stops once `keep` factors remain.
std::vector<std::size_t> greedy_chain_order(std::span<const Shape> shapes,
                                            std::size_t keep = 1);

/// Multiply-add count of evaluating a chain in the given merge order.
std::uint64_t chain_cost(std::span<const Shape> shapes,
                         std::span<const std::size_t> order);

/// One factor of a flattened product chain.
struct ChainFactor {
  enum class Kind { dense, diag, inverse };

  Kind kind = Kind::dense;
  /// dense: the factor itself; diag: the diagonal's source (square matrix or
  /// vector); inverse: the matrix being inverted.
  OperandRef operand;
  Shape shape;
};

/// Lowers expression trees into plans. Rules are applied top-down, first
/// match per subtree, specific patterns before the generic lowering.
class PlanBuilder {
 public:
  /// Lowers `node` and returns where its value will be. Leaves, views and
  /// transposes of them come back without any step.
  OperandRef lower(const ExprNode& node);

  /// Appends `call`, allocating its output slot.
  OperandRef emit(KernelCall call);
  void log_rule(std::string rule);

  /// Plan whose result is `result`; copies it into a fresh slot first unless
  /// it already is one.
  Plan finish(const OperandRef& result, const Shape& shape);

  const Plan& plan() const { return plan_; }

  // Rules. Each returns nothing when its pattern does not match the node.

  /// Add/Sub/ScalarMul regions (plus a lone leaf or view) as one fused loop.
  /// Logs R1 when the region holds an arithmetic node, R2 when an operand
  /// was read through a folded view or transpose.
  std::optional<OperandRef> fuse_elementwise(const ExprNode& node);
  /// Transpose/ColView/RowView folded into the operand's region.
  std::optional<OperandRef> fold_view(const ExprNode& node);
  /// DiagMat of a square product.
  std::optional<OperandRef> diag_of_product(const ExprNode& node);
  /// Trace of a product.
  std::optional<OperandRef> trace_of_product(const ExprNode& node);
  /// as_scalar(row * diagmat(x) * col).
  std::optional<OperandRef> scalar_triple(const ExprNode& node);
  /// Solve through the structure ladder.
  OperandRef structured_solve(const OperandRef& a, const OperandRef& b);

  /// Flattens nested MatMul nodes into factors, lowering each one.
  std::vector<ChainFactor> flatten_chain(const ExprNode& node);
  /// Greedily merges factors until `keep` remain, logging R6 for chains of
  /// three or more.
  void reduce_chain(std::vector<ChainFactor>& chain, std::size_t keep);
  /// Product of two adjacent factors: diag_scale (R3), syrk (R8), solve
  /// (R9), or gemm/gemv.
  ChainFactor multiply_pair(const ChainFactor& left, const ChainFactor& right);
  /// Dense operand holding the factor's value.
  OperandRef materialise(const ChainFactor& f);

 private:
  Plan plan_;
};

/// Lowers a validated tree into a plan. Throws ConformanceError for invalid
/// trees.
Plan rewrite(const ExprNode& node);
inline Plan rewrite(const Expr& e) { return rewrite(e.node()); }

/// validate, rewrite, execute.
DenseMatrix evaluate(const ExprNode& node);
inline DenseMatrix evaluate(const Expr& e) { return evaluate(e.node()); }

}  // namespace lazyla
