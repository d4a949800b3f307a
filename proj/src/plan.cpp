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


#include "lazyla/plan.hpp"

#include <cstdio>
#include <memory>

#include "lazyla/error.hpp"
#include "lazyla/rewrite.hpp"
#include "lazyla/trace.hpp"

namespace lazyla {

OperandRef OperandRef::of_leaf(const DenseMatrix& m) {
  OperandRef r;
  r.source = Source::leaf;
  r.leaf = &m;
  r.region_rows = m.n_rows();
  r.region_cols = m.n_cols();
  return r;
}

OperandRef OperandRef::of_slot(std::size_t slot, std::size_t rows,
                               std::size_t cols) {
  OperandRef r;
  r.source = Source::slot;
  r.slot = slot;
  r.region_rows = rows;
  r.region_cols = cols;
  return r;
}

OperandRef OperandRef::col(std::size_t j) const {
  OperandRef r = *this;
  if (transposed) {
    r.row_offset += j;
    r.region_rows = 1;
  } else {
    r.col_offset += j;
    r.region_cols = 1;
  }
  return r;
}

OperandRef OperandRef::row(std::size_t i) const {
  OperandRef r = *this;
  if (transposed) {
    r.col_offset += i;
    r.region_cols = 1;
  } else {
    r.row_offset += i;
    r.region_rows = 1;
  }
  return r;
}

OperandRef OperandRef::t() const {
  OperandRef r = *this;
  r.transposed = !transposed;
  return r;
}

OperandRef OperandRef::untransposed() const {
  OperandRef r = *this;
  r.transposed = false;
  return r;
}

bool OperandRef::same_storage_region(const OperandRef& o) const {
  if (source != o.source) return false;
  if (source == Source::leaf ? leaf->id() != o.leaf->id() : slot != o.slot) {
    return false;
  }
  return row_offset == o.row_offset && col_offset == o.col_offset &&
         region_rows == o.region_rows && region_cols == o.region_cols;
}

bool OperandRef::is_whole_slot() const {
  return source == Source::slot && !transposed && row_offset == 0 &&
         col_offset == 0;
}

std::string format_rule_log(const std::vector<std::string>& log) {
  std::string out;
  for (const auto& r : log) {
    if (!out.empty()) out += ',';
    out += r;
  }
  return out;
}

namespace {

std::string describe(const OperandRef& op) {
  std::string s = op.source == OperandRef::Source::leaf
                      ? "leaf#" + std::to_string(op.leaf->id())
                      : "t" + std::to_string(op.slot);
  if (op.row_offset != 0 || op.col_offset != 0 ||
      (op.source == OperandRef::Source::leaf &&
       (op.region_rows != op.leaf->n_rows() ||
        op.region_cols != op.leaf->n_cols()))) {
    s += "[" + std::to_string(op.row_offset) + ":" +
         std::to_string(op.row_offset + op.region_rows) + "," +
         std::to_string(op.col_offset) + ":" +
         std::to_string(op.col_offset + op.region_cols) + "]";
  }
  if (op.transposed) s += "^T";
  return s;
}

class Executor {
 public:
  explicit Executor(const Plan& plan) : slots_(plan.slot_count) {}

  MatrixView resolve(const OperandRef& op) const {
    const DenseMatrix& base =
        op.source == OperandRef::Source::leaf ? *op.leaf : *slots_[op.slot];
    return {base,          op.row_offset,  op.col_offset,
            op.region_rows, op.region_cols, op.transposed};
  }

  void store(std::size_t slot, DenseMatrix m) {
    slots_[slot] = std::make_unique<DenseMatrix>(std::move(m));
  }

  void store_scalar(std::size_t slot, double x) {
    auto m = DenseMatrix::uninitialized(1, 1);
    m(0, 0) = x;
    store(slot, std::move(m));
  }

  void run(const KernelCall& s) {
    auto in = [&](std::size_t i) { return resolve(s.operands.at(i)); };
    const Shape& o = s.out_shape;
    switch (s.kernel) {
      case KernelId::fused_axpby_n: {
        std::vector<MatrixView> src;
        src.reserve(s.operands.size());
        for (const auto& op : s.operands) src.push_back(resolve(op));
        auto out = DenseMatrix::uninitialized(o.n_rows, o.n_cols);
        kernels::fused_axpby_n(s.coeffs, src, out);
        store(s.out_slot, std::move(out));
        break;
      }
      case KernelId::gemm: {
        auto out = DenseMatrix::uninitialized(o.n_rows, o.n_cols);
        kernels::gemm(in(0), in(1), s.trans_a, s.trans_b, out);
        store(s.out_slot, std::move(out));
        break;
      }
      case KernelId::gemv: {
        auto out = DenseMatrix::uninitialized(o.n_rows, o.n_cols);
        kernels::gemv(in(0), s.trans_a, in(1), out);
        store(s.out_slot, std::move(out));
        break;
      }
      case KernelId::syrk: {
        auto out = DenseMatrix::uninitialized(o.n_rows, o.n_cols);
        kernels::syrk(in(0), out);
        store(s.out_slot, std::move(out));
        break;
      }
      case KernelId::diag_scale: {
        auto out = DenseMatrix::uninitialized(o.n_rows, o.n_cols);
        kernels::diag_scale(diag_source(in(0)), in(1), s.side, out);
        store(s.out_slot, std::move(out));
        break;
      }
      case KernelId::diag_of_product: {
        DenseMatrix out(o.n_rows, o.n_cols);
        kernels::diag_of_product(in(0), in(1),
                                 {out.data(), o.n_rows, o.n_rows + 1});
        store(s.out_slot, std::move(out));
        break;
      }
      case KernelId::trace_of_product:
        store_scalar(s.out_slot, kernels::trace_of_product(in(0), in(1)));
        break;
      case KernelId::triple_diag_dot:
        store_scalar(s.out_slot,
                     kernels::triple_diag_dot(vector_of(in(0)),
                                              diag_source(in(1)),
                                              vector_of(in(2))));
        break;
      case KernelId::diag_sum:
        store_scalar(s.out_slot, kernels::diag_sum(in(0)));
        break;
      case KernelId::lu_factor:
        throw ContractViolation("lu_factor is not a plan step");
      case KernelId::lu_solve:
        if (s.runtime_dispatch) {
          solve_dispatched(s);
        } else {
          store(s.out_slot, kernels::lu_solve(in(0), in(1)));
        }
        break;
      case KernelId::band_solve:
        store(s.out_slot, kernels::band_solve(in(0), in(1), s.kl, s.ku));
        break;
      case KernelId::triangular_solve:
        store(s.out_slot, kernels::triangular_solve(in(0), in(1), s.upper));
        break;
      case KernelId::explicit_inverse:
        store(s.out_slot, kernels::explicit_inverse(in(0)));
        break;
      case KernelId::transpose_copy:
        store(s.out_slot, kernels::transpose_copy(in(0)));
        break;
      case KernelId::diag_materialise:
        store(s.out_slot, kernels::diag_materialise(diag_source(in(0))));
        break;
    }
  }

  DenseMatrix take(std::size_t slot) { return std::move(*slots_[slot]); }

 private:
  void solve_dispatched(const KernelCall& s) {
    const MatrixView a = resolve(s.operands.at(0));
    const MatrixView b = resolve(s.operands.at(1));
    const SolverChoice c = dispatch_solver(a);
    instrument::rule("R10:" + c.tag);
    switch (c.kernel) {
      case KernelId::band_solve:
        store(s.out_slot, kernels::band_solve(a, b, c.kl, c.ku));
        break;
      case KernelId::triangular_solve:
        store(s.out_slot, kernels::triangular_solve(a, b, c.upper));
        break;
      default:
        store(s.out_slot, kernels::lu_solve(a, b));
        break;
    }
  }

  std::vector<std::unique_ptr<DenseMatrix>> slots_;
};

}  // namespace

std::string to_string(const Plan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const KernelCall& s = plan.steps[i];
    out += std::to_string(i) + ": t" + std::to_string(s.out_slot) + " = " +
           std::string(to_string(s.kernel)) + "(";
    for (std::size_t k = 0; k < s.operands.size(); ++k) {
      if (k != 0) out += ", ";
      if (k < s.coeffs.size()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g*", s.coeffs[k]);
        out += buf;
      }
      out += describe(s.operands[k]);
    }
    out += ")";
    if (s.trans_a) out += " trans_a";
    if (s.trans_b) out += " trans_b";
    if (s.kernel == KernelId::diag_scale) {
      out += s.side == Side::left ? " left" : " right";
    }
    if (s.kernel == KernelId::band_solve) {
      out += " kl=" + std::to_string(s.kl) + " ku=" + std::to_string(s.ku);
    }
    if (s.kernel == KernelId::triangular_solve) {
      out += s.upper ? " upper" : " lower";
    }
    if (s.runtime_dispatch) out += " dispatch";
    out += " -> " + to_string(s.out_shape) + "\n";
  }
  out += "result: t" + std::to_string(plan.result_slot) + "\n";
  out += "rules: " + format_rule_log(plan.rule_log) + "\n";
  return out;
}

DenseMatrix execute(const Plan& plan) {
  Executor ex(plan);
  for (const KernelCall& s : plan.steps) ex.run(s);
  return ex.take(plan.result_slot);
}

}  // namespace lazyla
