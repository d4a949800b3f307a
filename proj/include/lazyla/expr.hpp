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
#include <string>
#include <string_view>
#include <vector>

#include "lazyla/matrix.hpp"

namespace lazyla {

enum class NodeKind {
  Leaf,
  ScalarMul,
  Add,
  Sub,
  Transpose,
  Inverse,
  DiagMat,
  MatMul,
  Solve,
  Trace,
  AsScalar,
  ColView,
  RowView,
};

std::string_view to_string(NodeKind kind);

/// Number of children a node of `kind` has.
std::size_t arity(NodeKind kind);

struct Shape {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  bool is_scalar = false;

  bool operator==(const Shape&) const = default;
  std::size_t n_elem() const { return n_rows * n_cols; }
};

std::string to_string(const Shape& s);

class ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

/// Immutable node of a delayed-evaluation expression tree. Leaves refer to a
/// matrix owned elsewhere, which must outlive every tree built on it.
class ExprNode {
 public:
  static NodePtr leaf(const DenseMatrix& m);
  static NodePtr scalar_mul(double s, NodePtr child);
  static NodePtr unary(NodeKind kind, NodePtr child);
  static NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs);
  static NodePtr view(NodeKind kind, std::size_t index, NodePtr child);

  NodeKind kind() const noexcept { return kind_; }
  const std::vector<NodePtr>& children() const noexcept { return children_; }
  const ExprNode& child(std::size_t i) const { return *children_.at(i); }
  double scalar() const noexcept { return scalar_; }
  std::size_t index() const noexcept { return index_; }
  const DenseMatrix& matrix() const noexcept { return *matrix_; }
  std::uint64_t matrix_id() const noexcept { return matrix_id_; }

 private:
  ExprNode(NodeKind kind, std::vector<NodePtr> children)
      : kind_(kind), children_(std::move(children)) {}

  NodeKind kind_;
  std::vector<NodePtr> children_;
  double scalar_ = 0.0;
  std::size_t index_ = 0;
  const DenseMatrix* matrix_ = nullptr;
  std::uint64_t matrix_id_ = 0;
};

/// Value handle used to write expressions; combining Exprs builds a tree and
/// never evaluates, allocates matrices, or checks shapes.
class Expr {
 public:
  Expr(const DenseMatrix& m) : node_(ExprNode::leaf(m)) {}  // NOLINT
  Expr(DenseMatrix&&) = delete;
  explicit Expr(NodePtr node) : node_(std::move(node)) {}

  const ExprNode& node() const noexcept { return *node_; }
  const NodePtr& ptr() const noexcept { return node_; }

 private:
  NodePtr node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(double s, const Expr& a);
Expr operator*(const Expr& a, double s);
/// Matrix product.
Expr operator*(const Expr& a, const Expr& b);
Expr transpose(const Expr& a);
Expr inv(const Expr& a);
Expr diagmat(const Expr& a);
Expr trace(const Expr& a);
Expr as_scalar(const Expr& a);
Expr solve(const Expr& a, const Expr& b);
Expr col(const Expr& a, std::size_t j);
Expr row(const Expr& a, std::size_t i);

/// Bottom-up shape computation. Throws ConformanceError naming the node kind,
/// the offending shapes, and the path of the failing node.
Shape infer_shape(const ExprNode& node);
inline Shape infer_shape(const Expr& e) { return infer_shape(e.node()); }

/// Throws ConformanceError unless every subtree has a well-defined shape.
void validate(const ExprNode& node);
inline void validate(const Expr& e) { validate(e.node()); }

/// Canonical text, e.g. Add(ScalarMul(0.4,Leaf#1),ScalarMul(0.6,Leaf#2)).
std::string render(const ExprNode& node);
inline std::string render(const Expr& e) { return render(e.node()); }

/// Eager evaluation: every node materialises a fresh temporary (leaves are
/// read in place). Scalar results come back as 1x1 matrices.
DenseMatrix naive_evaluate(const ExprNode& node);
inline DenseMatrix naive_evaluate(const Expr& e) {
  return naive_evaluate(e.node());
}

}  // namespace lazyla
