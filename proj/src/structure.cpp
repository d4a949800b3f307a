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


#include "lazyla/structure.hpp"

#include <algorithm>

namespace lazyla {

StructureInfo analyze_structure(const DenseMatrix& m) {
  return analyze_structure(full_view(m));
}

StructureInfo analyze_structure(const MatrixView& m) {
  StructureInfo info;
  const std::size_t rows = m.n_rows();
  const std::size_t cols = m.n_cols();
  const double* origin = m.origin();
  const std::size_t rs = m.row_stride(), cs = m.col_stride();
  info.is_square = rows == cols;

  bool symmetric = info.is_square;
  std::size_t lower = 0;
  std::size_t upper = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = origin + j * cs;
    for (std::size_t i = 0; i < rows; ++i) {
      const double x = col[i * rs];
      if (x != 0.0) {
        if (i > j) {
          lower = std::max(lower, i - j);
        } else {
          upper = std::max(upper, j - i);
        }
      }
      // Each off-diagonal pair is compared once, from its upper element.
      if (symmetric && i < j && x != m(j, i)) symmetric = false;
    }
  }
  info.lower_bandwidth = lower;
  info.upper_bandwidth = upper;
  info.is_upper_triangular = info.is_square && lower == 0;
  info.is_lower_triangular = info.is_square && upper == 0;
  info.is_symmetric = symmetric;
  return info;
}

}  // namespace lazyla
