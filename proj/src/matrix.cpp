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


#include "lazyla/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <random>

#include "lazyla/error.hpp"
#include "lazyla/trace.hpp"

namespace lazyla {

namespace {

std::uint64_t next_id() {
  static std::atomic<std::uint64_t> counter{0};
  return counter.fetch_add(1, std::memory_order_relaxed) + 1;
}

std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t n_rows, std::size_t n_cols, NoInit)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      id_(next_id()),
      data_(std::make_unique_for_overwrite<double[]>(n_rows * n_cols)) {
  instrument::alloc(id_, n_rows_, n_cols_);
}

DenseMatrix::DenseMatrix(std::size_t n_rows, std::size_t n_cols)
    : DenseMatrix(n_rows, n_cols, NoInit{}) {
  std::fill_n(data_.get(), n_elem(), 0.0);
}

DenseMatrix DenseMatrix::uninitialized(std::size_t n_rows,
                                       std::size_t n_cols) {
  return DenseMatrix(n_rows, n_cols, NoInit{});
}

DenseMatrix::~DenseMatrix() { release(); }

void DenseMatrix::release() noexcept {
  if (id_ != 0) {
    instrument::release(id_, n_rows_, n_cols_);
  }
  data_.reset();
  id_ = 0;
  n_rows_ = n_cols_ = 0;
}

DenseMatrix::DenseMatrix(const DenseMatrix& other)
    : DenseMatrix(other.n_rows_, other.n_cols_, NoInit{}) {
  std::copy_n(other.data_.get(), n_elem(), data_.get());
}

DenseMatrix& DenseMatrix::operator=(const DenseMatrix& other) {
  if (this != &other) {
    DenseMatrix tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

DenseMatrix::DenseMatrix(DenseMatrix&& other) noexcept
    : n_rows_(other.n_rows_),
      n_cols_(other.n_cols_),
      id_(other.id_),
      data_(std::move(other.data_)) {
  other.id_ = 0;
  other.n_rows_ = other.n_cols_ = 0;
}

DenseMatrix& DenseMatrix::operator=(DenseMatrix&& other) noexcept {
  if (this != &other) {
    release();
    n_rows_ = other.n_rows_;
    n_cols_ = other.n_cols_;
    id_ = other.id_;
    data_ = std::move(other.data_);
    other.id_ = 0;
    other.n_rows_ = other.n_cols_ = 0;
  }
  return *this;
}

double DenseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_rows_ || j >= n_cols_) {
    throw IndexError("element (" + std::to_string(i) + "," +
                     std::to_string(j) + ") outside " +
                     shape_str(n_rows_, n_cols_) + " matrix");
  }
  return (*this)(i, j);
}

DenseMatrix make_matrix(std::size_t n_rows, std::size_t n_cols,
                        const FillSpec& spec) {
  struct Visitor {
    std::size_t rows, cols;

    DenseMatrix operator()(const fill::Zeros&) const {
      return DenseMatrix(rows, cols);
    }
    DenseMatrix operator()(const fill::Identity&) const {
      if (rows != cols) {
        throw DimensionError("identity fill requires a square shape, got " +
                             shape_str(rows, cols));
      }
      DenseMatrix m(rows, cols);
      for (std::size_t i = 0; i < rows; ++i) m(i, i) = 1.0;
      return m;
    }
    DenseMatrix operator()(const fill::Uniform& u) const {
      auto m = DenseMatrix::uninitialized(rows, cols);
      std::mt19937_64 rng(u.seed);
      std::uniform_real_distribution<double> dist(0.0, 1.0);
      for (double& x : m.values()) x = dist(rng);
      return m;
    }
    DenseMatrix operator()(const fill::Values& v) const {
      if (v.values.size() != rows * cols) {
        throw LengthError("expected " + std::to_string(rows * cols) +
                          " values for a " + shape_str(rows, cols) +
                          " matrix, got " + std::to_string(v.values.size()));
      }
      auto m = DenseMatrix::uninitialized(rows, cols);
      std::copy(v.values.begin(), v.values.end(), m.data());
      return m;
    }
  };
  return std::visit(Visitor{n_rows, n_cols}, spec);
}

std::vector<double> to_values(const DenseMatrix& m) {
  return {m.values().begin(), m.values().end()};
}

std::string to_text(const DenseMatrix& m) {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j != 0) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

MatrixView::MatrixView(const DenseMatrix& base, std::size_t row_offset,
                       std::size_t col_offset, std::size_t region_rows,
                       std::size_t region_cols, bool transposed)
    : base_(&base),
      row_offset_(row_offset),
      col_offset_(col_offset),
      region_rows_(region_rows),
      region_cols_(region_cols),
      transposed_(transposed) {
  if (row_offset + region_rows > base.n_rows() ||
      col_offset + region_cols > base.n_cols()) {
    throw IndexError("view region exceeds " +
                     shape_str(base.n_rows(), base.n_cols()) + " base");
  }
}

double MatrixView::at(std::size_t i, std::size_t j) const {
  if (i >= n_rows() || j >= n_cols()) {
    throw IndexError("element (" + std::to_string(i) + "," +
                     std::to_string(j) + ") outside " +
                     shape_str(n_rows(), n_cols()) + " view");
  }
  return (*this)(i, j);
}

MatrixView MatrixView::col(std::size_t j) const {
  if (j >= n_cols()) {
    throw IndexError("column " + std::to_string(j) + " outside " +
                     shape_str(n_rows(), n_cols()) + " view");
  }
  if (transposed_) {
    return {*base_, row_offset_ + j, col_offset_, 1, region_cols_, true};
  }
  return {*base_, row_offset_, col_offset_ + j, region_rows_, 1, false};
}

MatrixView MatrixView::row(std::size_t i) const {
  if (i >= n_rows()) {
    throw IndexError("row " + std::to_string(i) + " outside " +
                     shape_str(n_rows(), n_cols()) + " view");
  }
  if (transposed_) {
    return {*base_, row_offset_, col_offset_ + i, region_rows_, 1, true};
  }
  return {*base_, row_offset_ + i, col_offset_, 1, region_cols_, false};
}

MatrixView MatrixView::t() const {
  MatrixView v = *this;
  v.transposed_ = !transposed_;
  return v;
}

bool MatrixView::same_region(const MatrixView& other) const noexcept {
  return base_->id() == other.base_->id() && row_offset_ == other.row_offset_ &&
         col_offset_ == other.col_offset_ &&
         region_rows_ == other.region_rows_ &&
         region_cols_ == other.region_cols_;
}

MatrixView full_view(const DenseMatrix& m) {
  return {m, 0, 0, m.n_rows(), m.n_cols(), false};
}

MatrixView col_view(const DenseMatrix& m, std::size_t j) {
  return full_view(m).col(j);
}

MatrixView row_view(const DenseMatrix& m, std::size_t i) {
  return full_view(m).row(i);
}

}  // namespace lazyla
