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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lazyla/error.hpp"
#include "lazyla/expr.hpp"
#include "lazyla/matrix.hpp"

namespace lazyla::bench {

enum class Mode { naive, optimised };
enum class ModeSelection { naive, optimised, both };
enum class Format { markdown, csv };

std::string_view to_string(Mode m);

struct BenchRecord {
  int expr_id = 0;
  std::size_t size = 0;
  Mode mode = Mode::naive;
  double mean_seconds = 0.0;
  std::uint64_t flops = 0;
  std::uint64_t allocations = 0;
  std::size_t runs = 0;
};

/// One of the ten benchmark expressions with the operands it reads. Operand
/// addresses stay fixed for the lifetime of the object.
struct BenchExpression {
  int expr_id = 0;
  std::size_t size = 0;
  std::vector<std::unique_ptr<DenseMatrix>> operands;
  Expr tree{NodePtr{}};
};

inline constexpr int kExpressionCount = 10;

/// Short formula of expression `expr_id`, e.g. "C = 0.4*A + 0.6*B".
std::string_view describe(int expr_id);

/// Builds expression `expr_id` (1..10) at size `m` (>= 4) with operands drawn
/// deterministically from `seed`. Throws UsageError on bad arguments.
BenchExpression build_expression(int expr_id, std::size_t m,
                                 std::uint64_t seed);

/// Tolerance used when comparing the two arms of `expr_id`.
double arm_tolerance(int expr_id);

/// ||a - b||_inf / ||b||_inf (or the absolute difference when b is zero);
/// infinite on shape mismatch.
double relative_difference(const DenseMatrix& a, const DenseMatrix& b);

/// Raised when the naive and optimised arms disagree.
class MismatchError : public Error {
 public:
  using Error::Error;
};

struct BenchOptions {
  std::vector<int> expr_ids;
  std::vector<std::size_t> sizes;
  std::size_t runs = 100;
  std::uint64_t seed = 42;
  ModeSelection mode = ModeSelection::both;
};

/// For every (expression, size) the arms are first checked against each
/// other (MismatchError on disagreement); then each selected arm gets a
/// warm-up run and `runs` timed evaluations of the same tree. Runs faster
/// than a microsecond are batched. Counters come from one extra
/// instrumented run.
std::vector<BenchRecord> run_bench(const BenchOptions& options);

/// Fraction of time saved by the optimised arm, if both arms are present.
std::optional<double> reduction(const std::vector<BenchRecord>& records,
                                int expr_id, std::size_t size);

std::string report(const std::vector<BenchRecord>& records, Format format);

}  // namespace lazyla::bench
