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


#include "lazyla/expr.hpp"

#include <charconv>
#include <optional>

#include "lazyla/error.hpp"
#include "lazyla/kernels.hpp"

namespace lazyla {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf:
      return "Leaf";
    case NodeKind::ScalarMul:
      return "ScalarMul";
    case NodeKind::Add:
      return "Add";
    case NodeKind::Sub:
      return "Sub";
    case NodeKind::Transpose:
      return "Transpose";
    case NodeKind::Inverse:
      return "Inverse";
    case NodeKind::DiagMat:
      return "DiagMat";
    case NodeKind::MatMul:
      return "MatMul";
    case NodeKind::Solve:
      return "Solve";
    case NodeKind::Trace:
      return "Trace";
    case NodeKind::AsScalar:
      return "AsScalar";
    case NodeKind::ColView:
      return "ColView";
    case NodeKind::RowView:
      return "RowView";
  }
  return "?";
}

std::size_t arity(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf:
      return 0;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::MatMul:
    case NodeKind::Solve:
      return 2;
    default:
      return 1;
  }
}

std::string to_string(const Shape& s) {
  return std::to_string(s.n_rows) + "x" + std::to_string(s.n_cols);
}

NodePtr ExprNode::leaf(const DenseMatrix& m) {
  auto n = std::shared_ptr<ExprNode>(new ExprNode(NodeKind::Leaf, {}));
  n->matrix_ = &m;
  n->matrix_id_ = m.id();
  return n;
}

NodePtr ExprNode::scalar_mul(double s, NodePtr child) {
  auto n = std::shared_ptr<ExprNode>(
      new ExprNode(NodeKind::ScalarMul, {std::move(child)}));
  n->scalar_ = s;
  return n;
}

NodePtr ExprNode::unary(NodeKind kind, NodePtr child) {
  if (arity(kind) != 1 || kind == NodeKind::ScalarMul ||
      kind == NodeKind::ColView || kind == NodeKind::RowView) {
    throw UsageError(std::string(to_string(kind)) + " is not a plain unary");
  }
  return std::shared_ptr<ExprNode>(new ExprNode(kind, {std::move(child)}));
}

NodePtr ExprNode::binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  if (arity(kind) != 2) {
    throw UsageError(std::string(to_string(kind)) + " is not binary");
  }
  return std::shared_ptr<ExprNode>(
      new ExprNode(kind, {std::move(lhs), std::move(rhs)}));
}

NodePtr ExprNode::view(NodeKind kind, std::size_t index, NodePtr child) {
  if (kind != NodeKind::ColView && kind != NodeKind::RowView) {
    throw UsageError(std::string(to_string(kind)) + " is not a view");
  }
  auto n = std::shared_ptr<ExprNode>(new ExprNode(kind, {std::move(child)}));
  n->index_ = index;
  return n;
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(ExprNode::binary(NodeKind::Add, a.ptr(), b.ptr()));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(ExprNode::binary(NodeKind::Sub, a.ptr(), b.ptr()));
}
Expr operator*(double s, const Expr& a) {
  return Expr(ExprNode::scalar_mul(s, a.ptr()));
}
Expr operator*(const Expr& a, double s) {
  return Expr(ExprNode::scalar_mul(s, a.ptr()));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(ExprNode::binary(NodeKind::MatMul, a.ptr(), b.ptr()));
}
Expr transpose(const Expr& a) {
  return Expr(ExprNode::unary(NodeKind::Transpose, a.ptr()));
}
Expr inv(const Expr& a) {
  return Expr(ExprNode::unary(NodeKind::Inverse, a.ptr()));
}
Expr diagmat(const Expr& a) {
  return Expr(ExprNode::unary(NodeKind::DiagMat, a.ptr()));
}
Expr trace(const Expr& a) {
  return Expr(ExprNode::unary(NodeKind::Trace, a.ptr()));
}
Expr as_scalar(const Expr& a) {
  return Expr(ExprNode::unary(NodeKind::AsScalar, a.ptr()));
}
Expr solve(const Expr& a, const Expr& b) {
  return Expr(ExprNode::binary(NodeKind::Solve, a.ptr(), b.ptr()));
}
Expr col(const Expr& a, std::size_t j) {
  return Expr(ExprNode::view(NodeKind::ColView, j, a.ptr()));
}
Expr row(const Expr& a, std::size_t i) {
  return Expr(ExprNode::view(NodeKind::RowView, i, a.ptr()));
}

namespace {

[[noreturn]] void fail(const ExprNode& node, const std::string& what,
                       const std::string& path) {
  throw ConformanceError(std::string(to_string(node.kind())) + ": " + what,
                         path);
}

Shape infer(const ExprNode& node, const std::string& path) {
  std::vector<Shape> in;
  in.reserve(node.children().size());
  for (std::size_t i = 0; i < node.children().size(); ++i) {
    in.push_back(infer(node.child(i), path + "." + std::to_string(i)));
  }
  auto pair = [&] {
    return "shapes " + to_string(in[0]) + " and " + to_string(in[1]);
  };

  switch (node.kind()) {
    case NodeKind::Leaf:
      return {node.matrix().n_rows(), node.matrix().n_cols(), false};
    case NodeKind::ScalarMul:
      return in[0];
    case NodeKind::Add:
    case NodeKind::Sub:
      if (in[0].n_rows != in[1].n_rows || in[0].n_cols != in[1].n_cols) {
        fail(node, pair() + " do not conform", path);
      }
      return {in[0].n_rows, in[0].n_cols, in[0].is_scalar && in[1].is_scalar};
    case NodeKind::Transpose:
      return {in[0].n_cols, in[0].n_rows, in[0].is_scalar};
    case NodeKind::Inverse:
      if (in[0].n_rows != in[0].n_cols) {
        fail(node, "shape " + to_string(in[0]) + " is not square", path);
      }
      return in[0];
    case NodeKind::DiagMat: {
      const Shape& s = in[0];
      if (s.n_rows == s.n_cols) return {s.n_rows, s.n_rows, false};
      if (s.n_cols == 1) return {s.n_rows, s.n_rows, false};
      if (s.n_rows == 1) return {s.n_cols, s.n_cols, false};
      fail(node, "shape " + to_string(s) + " is neither square nor a vector",
           path);
    }
    case NodeKind::MatMul:
      if (in[0].n_cols != in[1].n_rows) {
        fail(node, pair() + " do not conform", path);
      }
      return {in[0].n_rows, in[1].n_cols, false};
    case NodeKind::Solve:
      if (in[0].n_rows != in[0].n_cols) {
        fail(node, "coefficient shape " + to_string(in[0]) + " is not square",
             path);
      }
      if (in[1].n_rows != in[0].n_rows) {
        fail(node, pair() + " do not conform", path);
      }
      return {in[1].n_rows, in[1].n_cols, false};
    case NodeKind::Trace:
      if (in[0].n_rows != in[0].n_cols) {
        fail(node, "shape " + to_string(in[0]) + " is not square", path);
      }
      return {1, 1, true};
    case NodeKind::AsScalar:
      if (in[0].n_rows != 1 || in[0].n_cols != 1) {
        fail(node, "shape " + to_string(in[0]) + " is not 1x1", path);
      }
      return {1, 1, true};
    case NodeKind::ColView:
      if (node.index() >= in[0].n_cols) {
        fail(node, "column " + std::to_string(node.index()) + " outside " +
                       to_string(in[0]), path);
      }
      return {in[0].n_rows, 1, false};
    case NodeKind::RowView:
      if (node.index() >= in[0].n_rows) {
        fail(node, "row " + std::to_string(node.index()) + " outside " +
                       to_string(in[0]), path);
      }
      return {1, in[0].n_cols, false};
  }
  fail(node, "unknown node kind", path);
}

void render_into(const ExprNode& node, std::string& out) {
  out += to_string(node.kind());
  if (node.kind() == NodeKind::Leaf) {
    out += '#';
    out += std::to_string(node.matrix_id());
    return;
  }
  out += '(';
  bool first = true;
  if (node.kind() == NodeKind::ScalarMul) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, node.scalar());
    out.append(buf, res.ptr);
    first = false;
  } else if (node.kind() == NodeKind::ColView ||
             node.kind() == NodeKind::RowView) {
    out += std::to_string(node.index());
    first = false;
  }
  for (const auto& c : node.children()) {
    if (!first) out += ',';
    render_into(*c, out);
    first = false;
  }
  out += ')';
}

// A naive intermediate: either a leaf read in place or an owned temporary.
struct Value {
  std::unique_ptr<DenseMatrix> owned;
  MatrixView view;
};

Value own(DenseMatrix m) {
  Value v;
  v.owned = std::make_unique<DenseMatrix>(std::move(m));
  v.view = full_view(*v.owned);
  return v;
}

Value copy_elements(const MatrixView& src, double coeff = 1.0) {
  auto out = DenseMatrix::uninitialized(src.n_rows(), src.n_cols());
  const double c[] = {coeff};
  kernels::fused_axpby_n(c, std::span(&src, 1), out);
  return own(std::move(out));
}

Value scalar_value(double x) {
  auto out = DenseMatrix::uninitialized(1, 1);
  out(0, 0) = x;
  return own(std::move(out));
}

Value eval(const ExprNode& node) {
  switch (node.kind()) {
    case NodeKind::Leaf:
      return {nullptr, full_view(node.matrix())};
    case NodeKind::ScalarMul:
      return copy_elements(eval(node.child(0)).view, node.scalar());
    case NodeKind::Add:
    case NodeKind::Sub: {
      Value l = eval(node.child(0));
      Value r = eval(node.child(1));
      const double c[] = {1.0, node.kind() == NodeKind::Add ? 1.0 : -1.0};
      const MatrixView src[] = {l.view, r.view};
      auto out = DenseMatrix::uninitialized(l.view.n_rows(), l.view.n_cols());
      kernels::fused_axpby_n(c, src, out);
      return own(std::move(out));
    }
    case NodeKind::Transpose:
      return own(kernels::transpose_copy(eval(node.child(0)).view));
    case NodeKind::Inverse:
      return own(kernels::explicit_inverse(eval(node.child(0)).view));
    case NodeKind::DiagMat:
      return own(kernels::diag_materialise(
          diag_source(eval(node.child(0)).view)));
    case NodeKind::MatMul: {
      Value l = eval(node.child(0));
      Value r = eval(node.child(1));
      auto out = DenseMatrix::uninitialized(l.view.n_rows(), r.view.n_cols());
      if (r.view.n_cols() == 1) {
        kernels::gemv(l.view, false, r.view, out);
      } else {
        kernels::gemm(l.view, r.view, false, false, out);
      }
      return own(std::move(out));
    }
    case NodeKind::Solve: {
      Value a = eval(node.child(0));
      Value b = eval(node.child(1));
      return own(kernels::lu_solve(a.view, b.view));
    }
    case NodeKind::Trace:
      return scalar_value(kernels::diag_sum(eval(node.child(0)).view));
    case NodeKind::AsScalar:
      return copy_elements(eval(node.child(0)).view);
    case NodeKind::ColView:
      return copy_elements(eval(node.child(0)).view.col(node.index()));
    case NodeKind::RowView:
      return copy_elements(eval(node.child(0)).view.row(node.index()));
  }
  throw UsageError("unknown node kind");
}

}  // namespace

Shape infer_shape(const ExprNode& node) { return infer(node, "root"); }

void validate(const ExprNode& node) { (void)infer(node, "root"); }

std::string render(const ExprNode& node) {
  std::string out;
  render_into(node, out);
  return out;
}

DenseMatrix naive_evaluate(const ExprNode& node) {
  validate(node);
  Value v = eval(node);
  if (!v.owned) v = copy_elements(v.view);
  return std::move(*v.owned);
}

}  // namespace lazyla
