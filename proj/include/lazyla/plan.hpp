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
#include <string>
#include <vector>

#include "lazyla/expr.hpp"
#include "lazyla/kernels.hpp"
#include "lazyla/matrix.hpp"

namespace lazyla {

/// Where a kernel operand lives before execution: a leaf matrix of the tree
/// or a temporary slot written by an earlier step. The region fields mirror
/// MatrixView and are in the coordinates of that storage.
struct OperandRef {
  enum class Source { leaf, slot };

  Source source = Source::leaf;
  const DenseMatrix* leaf = nullptr;
  std::size_t slot = 0;
  std::size_t row_offset = 0;
  std::size_t col_offset = 0;
  std::size_t region_rows = 0;
  std::size_t region_cols = 0;
  bool transposed = false;

  static OperandRef of_leaf(const DenseMatrix& m);
  static OperandRef of_slot(std::size_t slot, std::size_t rows,
                            std::size_t cols);

  std::size_t n_rows() const { return transposed ? region_cols : region_rows; }
  std::size_t n_cols() const { return transposed ? region_rows : region_cols; }
  Shape shape() const { return {n_rows(), n_cols(), false}; }

  OperandRef col(std::size_t j) const;
  OperandRef row(std::size_t i) const;
  OperandRef t() const;
  /// Same operand read untransposed.
  OperandRef untransposed() const;

  /// Same storage (leaf id or slot) and the same region.
  bool same_storage_region(const OperandRef& other) const;
  /// True for an untransposed view of a whole slot.
  bool is_whole_slot() const;

  bool operator==(const OperandRef&) const = default;
};

/// One kernel invocation of a plan. `out_slot` receives the result.
struct KernelCall {
  KernelId kernel = KernelId::fused_axpby_n;
  std::vector<OperandRef> operands;
  /// fused_axpby_n coefficients.
  std::vector<double> coeffs;
  bool trans_a = false;
  bool trans_b = false;
  Side side = Side::left;
  std::size_t kl = 0;
  std::size_t ku = 0;
  bool upper = false;
  /// The coefficient matrix is computed inside the plan, so the solver is
  /// picked by analysing it at execution; `kernel` is then lu_solve, the
  /// general fallback.
  bool runtime_dispatch = false;
  std::size_t out_slot = 0;
  Shape out_shape;

  bool operator==(const KernelCall&) const = default;
};

struct Plan {
  std::vector<KernelCall> steps;
  Shape output_shape;
  std::vector<std::string> rule_log;
  std::size_t result_slot = 0;
  std::size_t slot_count = 0;

  bool operator==(const Plan&) const = default;
};

/// Comma-separated rule identifiers, e.g. "R9,R10:BAND".
std::string format_rule_log(const std::vector<std::string>& log);

/// Human-readable listing, one step per line.
std::string to_string(const Plan& plan);

/// Runs the steps in order. Temporaries are released before returning; the
/// result is always freshly allocated (1x1 for scalar expressions).
DenseMatrix execute(const Plan& plan);

}  // namespace lazyla
