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


#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace lazyla::oracle {

DenseMatrix copy_view(const MatrixView& v) {
  DenseMatrix out(v.n_rows(), v.n_cols());
  for (std::size_t i = 0; i < v.n_rows(); ++i) {
    for (std::size_t j = 0; j < v.n_cols(); ++j) out(i, j) = v.at(i, j);
  }
  return out;
}

DenseMatrix multiply(const MatrixView& a, const MatrixView& b) {
  DenseMatrix out(a.n_rows(), b.n_cols());
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    for (std::size_t j = 0; j < b.n_cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.n_cols(); ++k) acc += a.at(i, k) * b.at(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  return multiply(full_view(a), full_view(b));
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.n_cols(), a.n_rows());
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    for (std::size_t j = 0; j < a.n_cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double x : a.values()) m = std::max(m, std::abs(x));
  return m;
}

double norm_inf(const DenseMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.n_cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double rel_err(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols()) {
    return std::numeric_limits<double>::infinity();
  }
  double diff = 0.0;
  for (std::size_t j = 0; j < a.n_cols(); ++j) {
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
      diff = std::max(diff, std::abs(a(i, j) - b(i, j)));
    }
  }
  const double scale = max_abs(b);
  return scale > 0.0 ? diff / scale : diff;
}

StructureInfo structure(const DenseMatrix& m) {
  StructureInfo s;
  s.is_square = m.n_rows() == m.n_cols();
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      if (i > j) s.lower_bandwidth = std::max(s.lower_bandwidth, i - j);
      if (j > i) s.upper_bandwidth = std::max(s.upper_bandwidth, j - i);
    }
  }
  s.is_upper_triangular = s.is_square && s.lower_bandwidth == 0;
  s.is_lower_triangular = s.is_square && s.upper_bandwidth == 0;
  s.is_symmetric = s.is_square;
  for (std::size_t i = 0; s.is_symmetric && i < m.n_rows(); ++i) {
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
      if (m(i, j) != m(j, i)) {
        s.is_symmetric = false;
        break;
      }
    }
  }
  return s;
}

std::optional<Shape> shape_of(const ExprNode& node) {
  std::vector<Shape> in;
  for (const auto& c : node.children()) {
    auto s = shape_of(*c);
    if (!s) return std::nullopt;
    in.push_back(*s);
  }
  const auto r = [&](std::size_t i) { return in[i].n_rows; };
  const auto c = [&](std::size_t i) { return in[i].n_cols; };
  switch (node.kind()) {
    case NodeKind::Leaf:
      return Shape{node.matrix().n_rows(), node.matrix().n_cols(), false};
    case NodeKind::ScalarMul:
      return in[0];
    case NodeKind::Add:
    case NodeKind::Sub:
      if (r(0) != r(1) || c(0) != c(1)) return std::nullopt;
      return Shape{r(0), c(0), in[0].is_scalar && in[1].is_scalar};
    case NodeKind::Transpose:
      return Shape{c(0), r(0), in[0].is_scalar};
    case NodeKind::Inverse:
      if (r(0) != c(0)) return std::nullopt;
      return in[0];
    case NodeKind::DiagMat:
      if (r(0) == c(0) || c(0) == 1) return Shape{r(0), r(0), false};
      if (r(0) == 1) return Shape{c(0), c(0), false};
      return std::nullopt;
    case NodeKind::MatMul:
      if (c(0) != r(1)) return std::nullopt;
      return Shape{r(0), c(1), false};
    case NodeKind::Solve:
      if (r(0) != c(0) || r(1) != r(0)) return std::nullopt;
      return Shape{r(1), c(1), false};
    case NodeKind::Trace:
      if (r(0) != c(0)) return std::nullopt;
      return Shape{1, 1, true};
    case NodeKind::AsScalar:
      if (r(0) != 1 || c(0) != 1) return std::nullopt;
      return Shape{1, 1, true};
    case NodeKind::ColView:
      if (node.index() >= c(0)) return std::nullopt;
      return Shape{r(0), 1, false};
    case NodeKind::RowView:
      if (node.index() >= r(0)) return std::nullopt;
      return Shape{1, c(0), false};
  }
  return std::nullopt;
}

namespace {

// Every parenthesisation of factors [lo, hi], by recursion on the split.
std::vector<std::uint64_t> all_costs(std::span<const Shape> s, std::size_t lo,
                                     std::size_t hi) {
  if (lo == hi) return {0};
  std::vector<std::uint64_t> out;
  for (std::size_t split = lo; split < hi; ++split) {
    const std::uint64_t join = static_cast<std::uint64_t>(s[lo].n_rows) *
                               s[split].n_cols * s[hi].n_cols;
    for (auto l : all_costs(s, lo, split)) {
      for (auto r : all_costs(s, split + 1, hi)) out.push_back(l + r + join);
    }
  }
  return out;
}

}  // namespace

std::uint64_t min_chain_cost(std::span<const Shape> shapes) {
  const auto costs = all_costs(shapes, 0, shapes.size() - 1);
  return *std::min_element(costs.begin(), costs.end());
}

std::uint64_t left_to_right_cost(std::span<const Shape> shapes) {
  std::uint64_t cost = 0;
  std::size_t rows = shapes[0].n_rows;
  for (std::size_t i = 1; i < shapes.size(); ++i) {
    cost += static_cast<std::uint64_t>(rows) * shapes[i].n_rows *
            shapes[i].n_cols;
  }
  return cost;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  DenseMatrix m(rows, cols);
  for (double& x : m.values()) x = d(rng);
  return m;
}

DenseMatrix boosted_square(std::size_t n, Rng& rng) {
  DenseMatrix m = random_matrix(n, n, rng);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += static_cast<double>(n);
  return m;
}

DenseMatrix random_band(std::size_t n, std::size_t kl, std::size_t ku,
                        Rng& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  DenseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i <= j + kl && j <= i + ku) m(i, j) = d(rng);
    }
    m(j, j) += static_cast<double>(kl + ku + 1);
  }
  return m;
}

NodePtr random_tree(std::span<const DenseMatrix> pool, int depth, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> kind(1, 12);
  std::uniform_int_distribution<std::size_t> idx(0, 3);
  if (depth <= 1 || kind(rng) <= 3) return ExprNode::leaf(pool[pick(rng)]);
  const auto sub = [&] { return random_tree(pool, depth - 1, rng); };
  const auto k = static_cast<NodeKind>(kind(rng));
  switch (k) {
    case NodeKind::ScalarMul:
      return ExprNode::scalar_mul(
          std::uniform_real_distribution<double>(-2, 2)(rng), sub());
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::MatMul:
    case NodeKind::Solve:
      return ExprNode::binary(k, sub(), sub());
    case NodeKind::ColView:
    case NodeKind::RowView:
      return ExprNode::view(k, idx(rng), sub());
    default:
      return ExprNode::unary(k, sub());
  }
}

bool contains(const ExprNode& node, NodeKind kind) {
  if (node.kind() == kind) return true;
  for (const auto& c : node.children()) {
    if (contains(*c, kind)) return true;
  }
  return false;
}

}  // namespace lazyla::oracle
