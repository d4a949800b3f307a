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
#include <span>
#include <string_view>
#include <vector>

#include "lazyla/matrix.hpp"

// Reference numerical kernels. Each call reports one kernel event plus its
// flop count to the current collector. Flop counts are nominal and follow
// these formulas (multiply and add counted separately):
//
//   fused_axpby_n       2 * n_elem * n_terms
//   gemm                2 * p * q * r          (p x q times q x r)
//   gemv                2 * p * q
//   syrk                n * (n + 1) * k        (A is n x k)
//   diag_scale          n_elem
//   diag_of_product     2 * p * q
//   trace_of_product    2 * p * q
//   triple_diag_dot     3 * n
//   diag_sum            n
//   lu_factor           2 * n^3 / 3            (integer division)
//   lu_solve            2 * n^3 / 3 + 2 * n^2 * k
//   band_solve          2 * n * kl * (kl + ku + 1) + 2 * n * k * (2*kl + ku + 1)
//   triangular_solve    n^2 * k
//   explicit_inverse    2 * n^3 / 3 + 2 * n^3
//   transpose_copy      0
//   diag_materialise    0

namespace lazyla {

enum class KernelId {
  fused_axpby_n,
  gemm,
  gemv,
  syrk,
  diag_scale,
  diag_of_product,
  trace_of_product,
  triple_diag_dot,
  diag_sum,
  lu_factor,
  lu_solve,
  band_solve,
  triangular_solve,
  explicit_inverse,
  transpose_copy,
  diag_materialise,
};

std::string_view to_string(KernelId id);

/// Read-only strided sequence, e.g. a matrix diagonal or a vector view.
struct StridedVector {
  const double* data = nullptr;
  std::size_t size = 0;
  std::size_t stride = 1;

  double operator[](std::size_t i) const noexcept { return data[i * stride]; }
};

struct MutableStridedVector {
  double* data = nullptr;
  std::size_t size = 0;
  std::size_t stride = 1;

  double& operator[](std::size_t i) const noexcept { return data[i * stride]; }
};

/// Main diagonal of a square view.
StridedVector diagonal_of(const MatrixView& v);
/// Elements of an n x 1 or 1 x n view.
StridedVector vector_of(const MatrixView& v);
/// Diagonal of a square view, or the elements of a vector-shaped one (the
/// two readings agree on 1 x 1).
StridedVector diag_source(const MatrixView& v);

enum class Side { left, right };

struct LuFactors {
  DenseMatrix lu;  // unit-lower L below the diagonal, U on and above
  /// Row k was interchanged with row pivots[k] at step k.
  std::vector<std::size_t> pivots;
};

namespace kernels {

/// out[i] = sum_j coeffs[j] * sources[j][i], one pass, terms accumulated left
/// to right. `out` may not alias a source.
void fused_axpby_n(std::span<const double> coeffs,
                   std::span<const MatrixView> sources, DenseMatrix& out);

/// out = op(a) * op(b); op transposes by index mapping when flagged.
void gemm(const MatrixView& a, const MatrixView& b, bool trans_a,
          bool trans_b, DenseMatrix& out);

/// out = op(a) * x, x an n x 1 (or 1 x n) view.
void gemv(const MatrixView& a, bool trans_a, const MatrixView& x,
          DenseMatrix& out);

/// out = a * a^T. Only the upper triangle is computed; the lower triangle is
/// a copy of it, so the result is exactly symmetric.
void syrk(const MatrixView& a, DenseMatrix& out);

/// left: out(i,j) = d[i] * b(i,j); right: out(i,j) = b(i,j) * d[j].
void diag_scale(StridedVector d, const MatrixView& b, Side side,
                DenseMatrix& out);

/// out_diag[i] = sum_k a(i,k) * b(k,i).
void diag_of_product(const MatrixView& a, const MatrixView& b,
                     MutableStridedVector out_diag);

double trace_of_product(const MatrixView& a, const MatrixView& b);

/// sum_i a[i] * d[i] * c[i].
double triple_diag_dot(StridedVector a, StridedVector d, StridedVector c);

/// Sum of the main diagonal of a square view.
double diag_sum(const MatrixView& a);

/// Partial (row) pivoting LU. Throws SingularityError on an exactly zero
/// pivot.
LuFactors lu_factor(const MatrixView& a);

DenseMatrix lu_solve(const MatrixView& a, const MatrixView& b);

/// Banded LU with partial pivoting on band storage; kl and ku must bound the
/// lower and upper bandwidths of `a`.
DenseMatrix band_solve(const MatrixView& a, const MatrixView& b,
                       std::size_t kl, std::size_t ku);

/// Substitution against the upper (or lower) triangle of `a`; throws
/// SingularityError on a zero diagonal entry.
DenseMatrix triangular_solve(const MatrixView& a, const MatrixView& b,
                             bool upper);

DenseMatrix explicit_inverse(const MatrixView& a);

DenseMatrix transpose_copy(const MatrixView& a);

/// Dense p x p matrix with `d` on the diagonal.
DenseMatrix diag_materialise(StridedVector d);

}  // namespace kernels
}  // namespace lazyla
