# Copyright 2026 The lazyla Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Delayed-evaluation dense linear algebra.

Build an expression from ``Expr`` leaves (``@`` multiplies, ``.T``
transposes), then ``evaluate`` it through the rewrite engine or
``naive_evaluate`` it eagerly.
"""

from ._lazyla import (
    ConformanceError,
    Error,
    Expr,
    Matrix,
    SingularityError,
    analyze_structure,
    as_scalar,
    col,
    diagmat,
    evaluate,
    inv,
    naive_evaluate,
    plan,
    render,
    row,
    rule_log,
    run_bench,
    solve,
    trace,
    traced,
    transpose,
    validate,
)

__all__ = [
    "ConformanceError",
    "Error",
    "Expr",
    "Matrix",
    "SingularityError",
    "analyze_structure",
    "as_scalar",
    "col",
    "diagmat",
    "evaluate",
    "inv",
    "naive_evaluate",
    "plan",
    "render",
    "row",
    "rule_log",
    "run_bench",
    "solve",
    "trace",
    "traced",
    "transpose",
    "validate",
]
