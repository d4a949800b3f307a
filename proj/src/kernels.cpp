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


#include "lazyla/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lazyla/error.hpp"
#include "lazyla/trace.hpp"

namespace lazyla {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

std::string dims(const MatrixView& v) { return dims(v.n_rows(), v.n_cols()); }

void require(bool ok, const char* kernel, const std::string& what) {
  if (!ok) throw ContractViolation(std::string(kernel) + ": " + what);
}

std::uint64_t cube_two_thirds(std::uint64_t n) { return 2 * n * n * n / 3; }

// In-place partial pivoting LU of a column-major n x n buffer.
void factor_in_place(DenseMatrix& lu, std::vector<std::size_t>& pivots) {
  const std::size_t n = lu.n_rows();
  double* a = lu.data();
  pivots.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double* col_k = a + k * n;
    std::size_t p = k;
    double best = std::abs(col_k[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(col_k[i]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    pivots[k] = p;
    if (col_k[p] == 0.0) throw SingularityError(k);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k + j * n], a[p + j * n]);
    }
    const double pivot = col_k[k];
    for (std::size_t i = k + 1; i < n; ++i) col_k[i] /= pivot;
    for (std::size_t j = k + 1; j < n; ++j) {
      double* col_j = a + j * n;
      const double u = col_j[k];
      for (std::size_t i = k + 1; i < n; ++i) col_j[i] -= col_k[i] * u;
    }
  }
}

// Overwrites x (n x k) with the solution of (P^T L U) y = x.
void lu_substitute(const DenseMatrix& lu, std::span<const std::size_t> pivots,
                   DenseMatrix& x) {
  const std::size_t n = lu.n_rows();
  const double* a = lu.data();
  for (std::size_t c = 0; c < x.n_cols(); ++c) {
    double* xc = x.data() + c * n;
    for (std::size_t k = 0; k < n; ++k) {
      if (pivots[k] != k) std::swap(xc[k], xc[pivots[k]]);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double v = xc[k];
      const double* col_k = a + k * n;
      for (std::size_t i = k + 1; i < n; ++i) xc[i] -= col_k[i] * v;
    }
    for (std::size_t k = n; k-- > 0;) {
      const double* col_k = a + k * n;
      xc[k] /= col_k[k];
      const double v = xc[k];
      for (std::size_t i = 0; i < k; ++i) xc[i] -= col_k[i] * v;
    }
  }
}

DenseMatrix dense_copy(const MatrixView& a) {
  auto m = DenseMatrix::uninitialized(a.n_rows(), a.n_cols());
  for (std::size_t j = 0; j < a.n_cols(); ++j) {
    for (std::size_t i = 0; i < a.n_rows(); ++i) m(i, j) = a(i, j);
  }
  return m;
}

}  // namespace

std::string_view to_string(KernelId id) {
  switch (id) {
    case KernelId::fused_axpby_n:
      return "fused_axpby_n";
    case KernelId::gemm:
      return "gemm";
    case KernelId::gemv:
      return "gemv";
    case KernelId::syrk:
      return "syrk";
    case KernelId::diag_scale:
      return "diag_scale";
    case KernelId::diag_of_product:
      return "diag_of_product";
    case KernelId::trace_of_product:
      return "trace_of_product";
    case KernelId::triple_diag_dot:
      return "triple_diag_dot";
    case KernelId::diag_sum:
      return "diag_sum";
    case KernelId::lu_factor:
      return "lu_factor";
    case KernelId::lu_solve:
      return "lu_solve";
    case KernelId::band_solve:
      return "band_solve";
    case KernelId::triangular_solve:
      return "triangular_solve";
    case KernelId::explicit_inverse:
      return "explicit_inverse";
    case KernelId::transpose_copy:
      return "transpose_copy";
    case KernelId::diag_materialise:
      return "diag_materialise";
  }
  return "?";
}

StridedVector diagonal_of(const MatrixView& v) {
  require(v.n_rows() == v.n_cols(), "diagonal_of", "view is not square");
  return {v.origin(), v.n_rows(), v.row_stride() + v.col_stride()};
}

StridedVector vector_of(const MatrixView& v) {
  if (v.n_cols() == 1) return {v.origin(), v.n_rows(), v.row_stride()};
  require(v.n_rows() == 1, "vector_of", "view " + dims(v) + " is not a vector");
  return {v.origin(), v.n_cols(), v.col_stride()};
}

StridedVector diag_source(const MatrixView& v) {
  if (v.n_rows() == v.n_cols()) return diagonal_of(v);
  return vector_of(v);
}

namespace kernels {

void fused_axpby_n(std::span<const double> coeffs,
                   std::span<const MatrixView> sources, DenseMatrix& out) {
  const std::size_t terms = sources.size();
  require(terms > 0 && coeffs.size() == terms, "fused_axpby_n",
          "coefficient and source counts differ");
  const std::size_t rows = out.n_rows();
  const std::size_t cols = out.n_cols();
  bool contiguous = true;
  for (const auto& s : sources) {
    require(s.n_rows() == rows && s.n_cols() == cols, "fused_axpby_n",
            "source " + dims(s) + " vs out " + dims(rows, cols));
    contiguous = contiguous && s.row_stride() == 1;
  }
  instrument::kernel("fused_axpby_n", 2 * out.n_elem() * terms, [&] {
    return dims(rows, cols) + ", terms=" + std::to_string(terms);
  });

  std::vector<const double*> ptr(terms);
  std::vector<std::size_t> rs(terms);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t t = 0; t < terms; ++t) {
      ptr[t] = sources[t].origin() + j * sources[t].col_stride();
      rs[t] = sources[t].row_stride();
    }
    double* o = out.data() + j * rows;
    if (contiguous && terms == 1) {
      const double c0 = coeffs[0];
      const double* p0 = ptr[0];
      for (std::size_t i = 0; i < rows; ++i) o[i] = c0 * p0[i];
    } else if (contiguous && terms == 2) {
      const double c0 = coeffs[0], c1 = coeffs[1];
      const double* p0 = ptr[0];
      const double* p1 = ptr[1];
      for (std::size_t i = 0; i < rows; ++i) o[i] = c0 * p0[i] + c1 * p1[i];
    } else {
      for (std::size_t i = 0; i < rows; ++i) {
        double acc = coeffs[0] * ptr[0][i * rs[0]];
        for (std::size_t t = 1; t < terms; ++t) {
          acc += coeffs[t] * ptr[t][i * rs[t]];
        }
        o[i] = acc;
      }
    }
  }
}

void gemm(const MatrixView& a_in, const MatrixView& b_in, bool trans_a,
          bool trans_b, DenseMatrix& out) {
  const MatrixView a = trans_a ? a_in.t() : a_in;
  const MatrixView b = trans_b ? b_in.t() : b_in;
  const std::size_t p = a.n_rows(), q = a.n_cols(), r = b.n_cols();
  require(b.n_rows() == q && out.n_rows() == p && out.n_cols() == r, "gemm",
          dims(a) + " * " + dims(b) + " -> " +
              dims(out.n_rows(), out.n_cols()));
  instrument::kernel("gemm", 2 * p * q * r, [&] {
    return dims(a_in) + " * " + dims(b_in) +
           ", trans_a=" + (trans_a ? "true" : "false") +
           ", trans_b=" + (trans_b ? "true" : "false");
  });

  const double* a0 = a.origin();
  const std::size_t ars = a.row_stride(), acs = a.col_stride();
  for (std::size_t j = 0; j < r; ++j) {
    double* o = out.data() + j * p;
    std::fill_n(o, p, 0.0);
    for (std::size_t k = 0; k < q; ++k) {
      const double bkj = b(k, j);
      const double* ak = a0 + k * acs;
      if (ars == 1) {
        for (std::size_t i = 0; i < p; ++i) o[i] += ak[i] * bkj;
      } else {
        for (std::size_t i = 0; i < p; ++i) o[i] += ak[i * ars] * bkj;
      }
    }
  }
}

void gemv(const MatrixView& a_in, bool trans_a, const MatrixView& x_in,
          DenseMatrix& out) {
  const MatrixView a = trans_a ? a_in.t() : a_in;
  const std::size_t p = a.n_rows(), q = a.n_cols();
  require(x_in.n_rows() == 1 || x_in.n_cols() == 1, "gemv",
          "operand " + dims(x_in) + " is not a vector");
  const StridedVector x = vector_of(x_in);
  require(x.size == q && out.n_rows() == p && out.n_cols() == 1, "gemv",
          dims(a) + " * " + dims(x_in) + " -> " +
              dims(out.n_rows(), out.n_cols()));
  instrument::kernel("gemv", 2 * p * q, [&] {
    return dims(a_in) + " * " + dims(x_in) +
           ", trans_a=" + (trans_a ? "true" : "false");
  });

  double* o = out.data();
  std::fill_n(o, p, 0.0);
  const double* a0 = a.origin();
  const std::size_t ars = a.row_stride(), acs = a.col_stride();
  for (std::size_t k = 0; k < q; ++k) {
    const double xk = x[k];
    const double* ak = a0 + k * acs;
    if (ars == 1) {
      for (std::size_t i = 0; i < p; ++i) o[i] += ak[i] * xk;
    } else {
      for (std::size_t i = 0; i < p; ++i) o[i] += ak[i * ars] * xk;
    }
  }
}

void syrk(const MatrixView& a, DenseMatrix& out) {
  const std::size_t n = a.n_rows(), k = a.n_cols();
  require(out.n_rows() == n && out.n_cols() == n, "syrk",
          dims(a) + " -> " + dims(out.n_rows(), out.n_cols()));
  instrument::kernel("syrk", n * (n + 1) * k,
                     [&] { return dims(a) + ", upper"; });

  // Column j of the upper triangle accumulates a(0..j, l) * a(j, l) over l,
  // the same per-element order gemm(a, a^T) uses.
  const double* a0 = a.origin();
  const std::size_t ars = a.row_stride(), acs = a.col_stride();
  double* o = out.data();
  for (std::size_t j = 0; j < n; ++j) {
    double* oc = o + j * n;
    std::fill_n(oc, j + 1, 0.0);
    for (std::size_t l = 0; l < k; ++l) {
      const double* al = a0 + l * acs;
      const double ajl = al[j * ars];
      if (ars == 1) {
        for (std::size_t i = 0; i <= j; ++i) oc[i] += al[i] * ajl;
      } else {
        for (std::size_t i = 0; i <= j; ++i) oc[i] += al[i * ars] * ajl;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) o[i + j * n] = o[j + i * n];
  }
}

void diag_scale(StridedVector d, const MatrixView& b, Side side,
                DenseMatrix& out) {
  const std::size_t rows = b.n_rows(), cols = b.n_cols();
  require(out.n_rows() == rows && out.n_cols() == cols, "diag_scale",
          "out shape differs from " + dims(b));
  require(d.size == (side == Side::left ? rows : cols), "diag_scale",
          "diagonal length " + std::to_string(d.size) + " vs " + dims(b));
  instrument::kernel("diag_scale", rows * cols, [&] {
    return dims(b) + (side == Side::left ? ", left" : ", right");
  });

  const double* b0 = b.origin();
  const std::size_t brs = b.row_stride(), bcs = b.col_stride();
  for (std::size_t j = 0; j < cols; ++j) {
    double* o = out.data() + j * rows;
    const double* bj = b0 + j * bcs;
    if (side == Side::left) {
      for (std::size_t i = 0; i < rows; ++i) o[i] = d[i] * bj[i * brs];
    } else {
      const double dj = d[j];
      for (std::size_t i = 0; i < rows; ++i) o[i] = bj[i * brs] * dj;
    }
  }
}

namespace {
// Shared by diag_of_product and trace_of_product; no instrumentation.
template <class Sink>
void product_diagonal(const MatrixView& a, const MatrixView& b, Sink&& sink) {
  const std::size_t p = a.n_rows(), q = a.n_cols();
  const double* a0 = a.origin();
  const double* b0 = b.origin();
  const std::size_t ars = a.row_stride(), acs = a.col_stride();
  const std::size_t brs = b.row_stride(), bcs = b.col_stride();
  for (std::size_t i = 0; i < p; ++i) {
    const double* ai = a0 + i * ars;
    const double* bi = b0 + i * bcs;
    double acc = 0.0;
    for (std::size_t k = 0; k < q; ++k) acc += ai[k * acs] * bi[k * brs];
    sink(i, acc);
  }
}
}  // namespace

void diag_of_product(const MatrixView& a, const MatrixView& b,
                     MutableStridedVector out_diag) {
  const std::size_t p = a.n_rows(), q = a.n_cols();
  require(b.n_rows() == q && b.n_cols() == p && out_diag.size == p,
          "diag_of_product", dims(a) + " * " + dims(b));
  instrument::kernel("diag_of_product", 2 * p * q,
                     [&] { return dims(a) + " * " + dims(b); });
  product_diagonal(a, b, [&](std::size_t i, double v) { out_diag[i] = v; });
}

double trace_of_product(const MatrixView& a, const MatrixView& b) {
  const std::size_t p = a.n_rows(), q = a.n_cols();
  require(b.n_rows() == q && b.n_cols() == p, "trace_of_product",
          dims(a) + " * " + dims(b));
  instrument::kernel("trace_of_product", 2 * p * q,
                     [&] { return dims(a) + " * " + dims(b); });
  double sum = 0.0;
  product_diagonal(a, b, [&](std::size_t, double v) { sum += v; });
  return sum;
}

double triple_diag_dot(StridedVector a, StridedVector d, StridedVector c) {
  require(a.size == d.size && d.size == c.size, "triple_diag_dot",
          "lengths " + std::to_string(a.size) + ", " + std::to_string(d.size) +
              ", " + std::to_string(c.size));
  instrument::kernel("triple_diag_dot", 3 * a.size,
                     [&] { return "n=" + std::to_string(a.size); });
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size; ++i) sum += a[i] * d[i] * c[i];
  return sum;
}

double diag_sum(const MatrixView& a) {
  require(a.n_rows() == a.n_cols(), "diag_sum", dims(a) + " is not square");
  instrument::kernel("diag_sum", a.n_rows(), [&] { return dims(a); });
  const StridedVector d = diagonal_of(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size; ++i) sum += d[i];
  return sum;
}

LuFactors lu_factor(const MatrixView& a) {
  require(a.n_rows() == a.n_cols(), "lu_factor", dims(a) + " is not square");
  const std::uint64_t n = a.n_rows();
  instrument::kernel("lu_factor", cube_two_thirds(n),
                     [&] { return dims(a); });
  LuFactors f{dense_copy(a), {}};
  factor_in_place(f.lu, f.pivots);
  return f;
}

DenseMatrix lu_solve(const MatrixView& a, const MatrixView& b) {
  const std::uint64_t n = a.n_rows(), k = b.n_cols();
  require(a.n_cols() == n && b.n_rows() == n, "lu_solve",
          dims(a) + " \\ " + dims(b));
  instrument::kernel("lu_solve", cube_two_thirds(n) + 2 * n * n * k,
                     [&] { return dims(a) + " \\ " + dims(b); });
  DenseMatrix lu = dense_copy(a);
  std::vector<std::size_t> pivots;
  factor_in_place(lu, pivots);
  DenseMatrix x = dense_copy(b);
  lu_substitute(lu, pivots, x);
  return x;
}

DenseMatrix band_solve(const MatrixView& a, const MatrixView& b,
                       std::size_t kl, std::size_t ku) {
  const std::size_t n = a.n_rows(), nrhs = b.n_cols();
  require(a.n_cols() == n && b.n_rows() == n, "band_solve",
          dims(a) + " \\ " + dims(b));
  instrument::kernel(
      "band_solve",
      2 * n * kl * (kl + ku + 1) + 2 * n * nrhs * (2 * kl + ku + 1), [&] {
        return dims(a) + " \\ " + dims(b) + ", kl=" + std::to_string(kl) +
               ", ku=" + std::to_string(ku);
      });

  // Band storage: ldab = 2*kl + ku + 1 rows, one column per matrix column.
  // A(i,j) lives at ab(kv + i - j, j) with kv = kl + ku; the top kl rows
  // receive the fill-in created by row interchanges.
  const std::size_t kv = kl + ku;
  const std::size_t ldab = 2 * kl + ku + 1;
  DenseMatrix ab(ldab, n);
  double* s = ab.data();
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return s[(kv + i - j) + j * ldab];
  };
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i0 = j > ku ? j - ku : 0;
    const std::size_t i1 = std::min(n - 1, j + kl);
    for (std::size_t i = i0; i <= i1; ++i) at(i, j) = a(i, j);
  }

  std::vector<std::size_t> pivots(n);
  std::size_t ju = 0;  // last column touched by the interchanges so far
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t km = std::min(kl, n - 1 - j);
    std::size_t jp = 0;
    double best = std::abs(at(j, j));
    for (std::size_t t = 1; t <= km; ++t) {
      const double v = std::abs(at(j + t, j));
      if (v > best) {
        best = v;
        jp = t;
      }
    }
    pivots[j] = j + jp;
    if (at(j + jp, j) == 0.0) throw SingularityError(j);
    ju = std::max(ju, std::min(j + ku + jp, n - 1));
    if (jp != 0) {
      for (std::size_t c = j; c <= ju; ++c) std::swap(at(j + jp, c), at(j, c));
    }
    if (km > 0) {
      const double pivot = at(j, j);
      for (std::size_t t = 1; t <= km; ++t) at(j + t, j) /= pivot;
      for (std::size_t c = j + 1; c <= ju; ++c) {
        const double u = at(j, c);
        for (std::size_t t = 1; t <= km; ++t) at(j + t, c) -= at(j + t, j) * u;
      }
    }
  }

  DenseMatrix x = dense_copy(b);
  for (std::size_t c = 0; c < nrhs; ++c) {
    double* xc = x.data() + c * n;
    if (kl > 0) {
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const std::size_t lm = std::min(kl, n - 1 - j);
        if (pivots[j] != j) std::swap(xc[j], xc[pivots[j]]);
        const double v = xc[j];
        for (std::size_t t = 1; t <= lm; ++t) xc[j + t] -= at(j + t, j) * v;
      }
    }
    for (std::size_t j = n; j-- > 0;) {
      xc[j] /= at(j, j);
      const double v = xc[j];
      const std::size_t i0 = j > kv ? j - kv : 0;
      for (std::size_t i = i0; i < j; ++i) xc[i] -= at(i, j) * v;
    }
  }
  return x;
}

DenseMatrix triangular_solve(const MatrixView& a, const MatrixView& b,
                             bool upper) {
  const std::uint64_t n = a.n_rows(), k = b.n_cols();
  require(a.n_cols() == n && b.n_rows() == n, "triangular_solve",
          dims(a) + " \\ " + dims(b));
  instrument::kernel("triangular_solve", n * n * k, [&] {
    return dims(a) + " \\ " + dims(b) + (upper ? ", upper" : ", lower");
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) == 0.0) throw SingularityError(i);
  }
  DenseMatrix x = dense_copy(b);
  for (std::size_t c = 0; c < k; ++c) {
    double* xc = x.data() + c * n;
    if (upper) {
      for (std::size_t j = n; j-- > 0;) {
        xc[j] /= a(j, j);
        const double v = xc[j];
        for (std::size_t i = 0; i < j; ++i) xc[i] -= a(i, j) * v;
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        xc[j] /= a(j, j);
        const double v = xc[j];
        for (std::size_t i = j + 1; i < n; ++i) xc[i] -= a(i, j) * v;
      }
    }
  }
  return x;
}

DenseMatrix explicit_inverse(const MatrixView& a) {
  require(a.n_rows() == a.n_cols(), "explicit_inverse",
          dims(a) + " is not square");
  const std::uint64_t n = a.n_rows();
  instrument::kernel("explicit_inverse", cube_two_thirds(n) + 2 * n * n * n,
                     [&] { return dims(a); });
  DenseMatrix lu = dense_copy(a);
  std::vector<std::size_t> pivots;
  factor_in_place(lu, pivots);
  DenseMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1.0;
  lu_substitute(lu, pivots, inv);
  return inv;
}

DenseMatrix transpose_copy(const MatrixView& a) {
  instrument::kernel("transpose_copy", 0, [&] { return dims(a); });
  auto out = DenseMatrix::uninitialized(a.n_cols(), a.n_rows());
  for (std::size_t j = 0; j < out.n_cols(); ++j) {
    for (std::size_t i = 0; i < out.n_rows(); ++i) out(i, j) = a(j, i);
  }
  return out;
}

DenseMatrix diag_materialise(StridedVector d) {
  instrument::kernel("diag_materialise", 0,
                     [&] { return "n=" + std::to_string(d.size); });
  DenseMatrix out(d.size, d.size);
  for (std::size_t i = 0; i < d.size; ++i) out(i, i) = d[i];
  return out;
}

}  // namespace kernels
}  // namespace lazyla
