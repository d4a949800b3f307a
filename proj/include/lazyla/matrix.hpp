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
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lazyla {

namespace fill {
struct Zeros {};
struct Identity {};
/// i.i.d. draws from [0, 1), reproducible from `seed`.
struct Uniform {
  std::uint64_t seed = 0;
};
/// Column-major element sequence.
struct Values {
  std::vector<double> values;
};
}  // namespace fill

using FillSpec =
    std::variant<fill::Zeros, fill::Identity, fill::Uniform, fill::Values>;

/// Dense column-major matrix of doubles.
///
/// Every buffer acquisition draws a fresh id from a process-wide counter, so
/// copies never share an id with their source while moves carry it along.
/// Acquisitions and releases are reported to the current trace collector.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero-filled.
  DenseMatrix(std::size_t n_rows, std::size_t n_cols);
  ~DenseMatrix();

  DenseMatrix(const DenseMatrix& other);
  DenseMatrix& operator=(const DenseMatrix& other);
  DenseMatrix(DenseMatrix&& other) noexcept;
  DenseMatrix& operator=(DenseMatrix&& other) noexcept;

  /// Storage whose contents are indeterminate; for kernels that overwrite
  /// every element.
  static DenseMatrix uninitialized(std::size_t n_rows, std::size_t n_cols);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t n_elem() const noexcept { return n_rows_ * n_cols_; }
  std::uint64_t id() const noexcept { return id_; }
  bool is_square() const noexcept { return n_rows_ == n_cols_; }

  double* data() noexcept { return data_.get(); }
  const double* data() const noexcept { return data_.get(); }
  std::span<double> values() noexcept { return {data_.get(), n_elem()}; }
  std::span<const double> values() const noexcept {
    return {data_.get(), n_elem()};
  }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i + j * n_rows_];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i + j * n_rows_];
  }

  /// Bounds-checked element access; throws IndexError.
  double at(std::size_t i, std::size_t j) const;

 private:
  struct NoInit {};
  DenseMatrix(std::size_t n_rows, std::size_t n_cols, NoInit);
  void release() noexcept;

  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::uint64_t id_ = 0;  // 0: no storage acquired
  std::unique_ptr<double[]> data_;
};

/// Throws DimensionError (identity on a non-square shape) or LengthError
/// (value count differs from n_rows * n_cols).
DenseMatrix make_matrix(std::size_t n_rows, std::size_t n_cols,
                        const FillSpec& fill);

/// Column-major copy of the elements.
std::vector<double> to_values(const DenseMatrix& m);

/// Rows top-to-bottom, elements separated by a space, each printed with 17
/// significant digits so the text round-trips.
std::string to_text(const DenseMatrix& m);

/// Non-owning window onto a rectangular region of a matrix, optionally read
/// transposed. The region (`row_offset`, `col_offset`, `region_rows`,
/// `region_cols`) is in base coordinates; the view's own shape is the region
/// shape, swapped when `transposed`.
class MatrixView {
 public:
  MatrixView() = default;
  MatrixView(const DenseMatrix& base, std::size_t row_offset,
             std::size_t col_offset, std::size_t region_rows,
             std::size_t region_cols, bool transposed = false);

  const DenseMatrix& base() const noexcept { return *base_; }
  std::size_t row_offset() const noexcept { return row_offset_; }
  std::size_t col_offset() const noexcept { return col_offset_; }
  std::size_t region_rows() const noexcept { return region_rows_; }
  std::size_t region_cols() const noexcept { return region_cols_; }
  bool transposed() const noexcept { return transposed_; }

  std::size_t n_rows() const noexcept {
    return transposed_ ? region_cols_ : region_rows_;
  }
  std::size_t n_cols() const noexcept {
    return transposed_ ? region_rows_ : region_cols_;
  }
  std::size_t n_elem() const noexcept { return region_rows_ * region_cols_; }

  /// Address of element (0,0); `row_stride`/`col_stride` step along the
  /// view's rows and columns.
  const double* origin() const noexcept {
    return base_->data() + row_offset_ + col_offset_ * base_->n_rows();
  }
  std::size_t row_stride() const noexcept {
    return transposed_ ? base_->n_rows() : 1;
  }
  std::size_t col_stride() const noexcept {
    return transposed_ ? 1 : base_->n_rows();
  }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return origin()[i * row_stride() + j * col_stride()];
  }
  /// Bounds-checked; throws IndexError.
  double at(std::size_t i, std::size_t j) const;

  MatrixView col(std::size_t j) const;
  MatrixView row(std::size_t i) const;
  MatrixView t() const;

  /// True when both views read the same elements of the same storage.
  bool same_region(const MatrixView& other) const noexcept;

 private:
  const DenseMatrix* base_ = nullptr;
  std::size_t row_offset_ = 0;
  std::size_t col_offset_ = 0;
  std::size_t region_rows_ = 0;
  std::size_t region_cols_ = 0;
  bool transposed_ = false;
};

MatrixView full_view(const DenseMatrix& m);
/// Throws IndexError when `j >= m.n_cols()`.
MatrixView col_view(const DenseMatrix& m, std::size_t j);
/// Throws IndexError when `i >= m.n_rows()`.
MatrixView row_view(const DenseMatrix& m, std::size_t i);
inline MatrixView transposed(const MatrixView& v) { return v.t(); }

}  // namespace lazyla
