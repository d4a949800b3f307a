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

#include "lazyla/matrix.hpp"

namespace lazyla {

/// Properties detected by a scan of the elements. Zero tests and the
/// symmetry test use exact comparison.
struct StructureInfo {
  bool is_square = false;
  std::size_t lower_bandwidth = 0;
  std::size_t upper_bandwidth = 0;
  bool is_upper_triangular = false;
  bool is_lower_triangular = false;
  bool is_symmetric = false;

  bool operator==(const StructureInfo&) const = default;
};

/// Single pass over the elements. For non-square input the bandwidths are
/// taken over the rectangular index set and every flag is false.
StructureInfo analyze_structure(const DenseMatrix& m);
StructureInfo analyze_structure(const MatrixView& v);

}  // namespace lazyla
