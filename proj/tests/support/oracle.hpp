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


// Brute-force reference implementations used only by tests. Nothing here
// calls into the kernels or the rewrite engine.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "lazyla/expr.hpp"
#include "lazyla/matrix.hpp"
#include "lazyla/structure.hpp"

namespace lazyla::oracle {

using Rng = std::mt19937_64;

/// Element-by-element copy of a view.
DenseMatrix copy_view(const MatrixView& v);

/// Textbook triple loop over element accessors.
DenseMatrix multiply(const MatrixView& a, const MatrixView& b);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);

/// ||a - b||_inf / ||b||_inf; the plain difference when b is zero.
double rel_err(const DenseMatrix& a, const DenseMatrix& b);
double norm_inf(const DenseMatrix& a);  // max row sum
double max_abs(const DenseMatrix& a);

StructureInfo structure(const DenseMatrix& m);

/// Independent shape propagation; nullopt when the tree does not conform.
std::optional<Shape> shape_of(const ExprNode& node);

/// Cheapest multiply-add count over every parenthesisation.
std::uint64_t min_chain_cost(std::span<const Shape> shapes);
/// Multiply-add count of strict left-to-right evaluation.
std::uint64_t left_to_right_cost(std::span<const Shape> shapes);

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng);
/// Random entries plus n on the diagonal.
DenseMatrix boosted_square(std::size_t n, Rng& rng);
/// Random band with the given bandwidths, diagonally dominant.
DenseMatrix random_band(std::size_t n, std::size_t kl, std::size_t ku,
                        Rng& rng);

/// Random tree of depth at most `depth` over leaves drawn from `pool`; may
/// or may not conform.
NodePtr random_tree(std::span<const DenseMatrix> pool, int depth, Rng& rng);
bool contains(const ExprNode& node, NodeKind kind);

}  // namespace lazyla::oracle
