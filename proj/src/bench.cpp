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


#include "lazyla/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "lazyla/rewrite.hpp"
#include "lazyla/trace.hpp"

namespace lazyla::bench {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t operand_seed(std::uint64_t seed, std::uint64_t k) {
  // splitmix64 step so neighbouring seeds give unrelated streams
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(Mode m) {
  return m == Mode::naive ? "naive" : "optimised";
}

std::string_view describe(int expr_id) {
  switch (expr_id) {
    case 1:
      return "C = 0.4*A + 0.6*B";
    case 2:
      return "C = A(:,first) + B(second,:)^T";
    case 3:
      return "C = diagmat(A) * B";
    case 4:
      return "C = diagmat(A * B)";
    case 5:
      return "k = trace(A * B)";
    case 6:
      return "E = A(m x m) * B(m x m/2) * C(m/2 x m/3) * D(m/3 x m/4)";
    case 7:
      return "k = a^T * diagmat(B) * c";
    case 8:
      return "B = A * A^T";
    case 9:
      return "C = inv(A) * b";
    case 10:
      return "C = solve(A, b), A tridiagonal";
    default:
      return "unknown";
  }
}

BenchExpression build_expression(int expr_id, std::size_t m,
                                 std::uint64_t seed) {
  if (expr_id < 1 || expr_id > kExpressionCount) {
    throw UsageError("unknown expression id " + std::to_string(expr_id));
  }
  if (m < 4) {
    throw UsageError("size must be at least 4, got " + std::to_string(m));
  }
  BenchExpression out;
  out.expr_id = expr_id;
  out.size = m;
  auto random = [&](std::size_t r, std::size_t c) -> DenseMatrix& {
    const std::uint64_t k = out.operands.size();
    out.operands.push_back(std::make_unique<DenseMatrix>(
        make_matrix(r, c, fill::Uniform{operand_seed(seed, k)})));
    return *out.operands.back();
  };

  switch (expr_id) {
    case 1: {
      const auto& a = random(m, m);
      const auto& b = random(m, m);
      out.tree = 0.4 * Expr(a) + 0.6 * Expr(b);
      break;
    }
    case 2: {
      const auto& a = random(m, m);
      const auto& b = random(m, m);
      out.tree = col(a, 0) + transpose(row(b, 1));
      break;
    }
    case 3: {
      const auto& a = random(m, m);
      const auto& b = random(m, m);
      out.tree = diagmat(a) * b;
      break;
    }
    case 4: {
      const auto& a = random(m, m);
      const auto& b = random(m, m);
      out.tree = diagmat(Expr(a) * b);
      break;
    }
    case 5: {
      const auto& a = random(m, m);
      const auto& b = random(m, m);
      out.tree = trace(Expr(a) * b);
      break;
    }
    case 6: {
      const auto& a = random(m, m);
      const auto& b = random(m, m / 2);
      const auto& c = random(m / 2, m / 3);
      const auto& d = random(m / 3, m / 4);
      out.tree = Expr(a) * b * c * d;
      break;
    }
    case 7: {
      const auto& a = random(m, 1);
      const auto& b = random(m, m);
      const auto& c = random(m, 1);
      out.tree = as_scalar(transpose(a) * diagmat(b) * c);
      break;
    }
    case 8: {
      const auto& a = random(m, m);
      out.tree = Expr(a) * transpose(a);
      break;
    }
    case 9: {
      auto& a = random(m, m);
      for (std::size_t i = 0; i < m; ++i) a(i, i) += static_cast<double>(m);
      const auto& b = random(m, 1);
      out.tree = inv(a) * b;
      break;
    }
    case 10: {
      auto& a = random(m, m);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
          if (i == j) {
            a(i, j) += 2.0 * static_cast<double>(m);
          } else if (i + 1 != j && j + 1 != i) {
            a(i, j) = 0.0;
          }
        }
      }
      const auto& b = random(m, 1);
      out.tree = solve(a, b);
      break;
    }
  }
  return out;
}

double arm_tolerance(int expr_id) {
  return expr_id == 9 || expr_id == 10 ? 1e-8 : 1e-12;
}

double relative_difference(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols()) {
    return std::numeric_limits<double>::infinity();
  }
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.n_elem(); ++i) {
    diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
    scale = std::max(scale, std::abs(b.data()[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

namespace {

template <class F>
double mean_seconds(F&& once, std::size_t runs) {
  auto start = Clock::now();
  once();  // warm-up, excluded
  const double first = seconds_since(start);

  std::size_t inner = 1;
  if (first < 1e-6) {
    inner = static_cast<std::size_t>(
        std::ceil(1e-5 / std::max(first, 1e-9)));
  }
  double total = 0.0;
  for (std::size_t r = 0; r < runs; ++r) {
    start = Clock::now();
    for (std::size_t i = 0; i < inner; ++i) once();
    total += seconds_since(start);
  }
  return total / static_cast<double>(runs * inner);
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchOptions& options) {
  if (options.runs < 1) throw UsageError("runs must be at least 1");
  std::vector<BenchRecord> records;
  for (int id : options.expr_ids) {
    for (std::size_t m : options.sizes) {
      const BenchExpression ex = build_expression(id, m, options.seed);
      const Expr& tree = ex.tree;

      {
        const DenseMatrix naive = naive_evaluate(tree);
        const DenseMatrix optimised = evaluate(tree);
        const double diff = relative_difference(optimised, naive);
        if (!(diff <= arm_tolerance(id))) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "expression %d at size %zu: arms differ by %.3e "
                        "(tolerance %.0e)",
                        id, m, diff, arm_tolerance(id));
          throw MismatchError(buf);
        }
      }

      std::vector<Mode> modes;
      if (options.mode != ModeSelection::optimised) modes.push_back(Mode::naive);
      if (options.mode != ModeSelection::naive) {
        modes.push_back(Mode::optimised);
      }
      for (Mode mode : modes) {
        auto once = [&] {
          if (mode == Mode::naive) {
            (void)naive_evaluate(tree);
          } else {
            (void)evaluate(tree);
          }
        };
        BenchRecord rec;
        rec.expr_id = id;
        rec.size = m;
        rec.mode = mode;
        rec.runs = options.runs;
        {
          Collector counters(false);
          CollectorScope scope(counters);
          once();
          rec.flops = counters.counters().flops;
          rec.allocations = counters.counters().allocations;
        }
        rec.mean_seconds = mean_seconds(once, options.runs);
        records.push_back(rec);
      }
    }
  }
  return records;
}

std::optional<double> reduction(const std::vector<BenchRecord>& records,
                                int expr_id, std::size_t size) {
  const BenchRecord* naive = nullptr;
  const BenchRecord* optimised = nullptr;
  for (const auto& r : records) {
    if (r.expr_id != expr_id || r.size != size) continue;
    (r.mode == Mode::naive ? naive : optimised) = &r;
  }
  if (naive == nullptr || optimised == nullptr || naive->mean_seconds <= 0.0) {
    return std::nullopt;
  }
  return 1.0 - optimised->mean_seconds / naive->mean_seconds;
}

std::string report(const std::vector<BenchRecord>& records, Format format) {
  std::string out;
  char buf[256];
  if (format == Format::csv) {
    out += "expr_id,size,mode,mean_seconds,flops,allocations,runs\n";
    for (const auto& r : records) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%s,%.6e,%llu,%llu,%zu\n",
                    r.expr_id, r.size, std::string(to_string(r.mode)).c_str(),
                    r.mean_seconds, static_cast<unsigned long long>(r.flops),
                    static_cast<unsigned long long>(r.allocations), r.runs);
      out += buf;
    }
    return out;
  }

  std::map<int, std::set<std::size_t>> layout;
  for (const auto& r : records) layout[r.expr_id].insert(r.size);
  auto seconds = [&](int id, std::size_t size, Mode mode) -> std::string {
    for (const auto& r : records) {
      if (r.expr_id == id && r.size == size && r.mode == mode) {
        std::snprintf(buf, sizeof buf, "%.2e", r.mean_seconds);
        return buf;
      }
    }
    return "n/a";
  };
  for (const auto& [id, sizes] : layout) {
    if (!out.empty()) out += '\n';
    out += "### (" + std::to_string(id) + ") " + std::string(describe(id)) +
           "\n\n";
    out += "| matrix size | naive | optimised | reduction |\n";
    out += "|---|---|---|---|\n";
    for (std::size_t size : sizes) {
      std::string red = "n/a";
      if (auto r = reduction(records, id, size)) {
        std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * *r);
        red = buf;
      }
      out += "| " + std::to_string(size) + "x" + std::to_string(size) +
             " | " + seconds(id, size, Mode::naive) + " | " +
             seconds(id, size, Mode::optimised) + " | " + red + " |\n";
    }
  }
  return out;
}

}  // namespace lazyla::bench
