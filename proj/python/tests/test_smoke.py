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


import numpy as np
import pytest

import lazyla as la


def m(rows):
    return la.Expr(la.Matrix(np.array(rows, dtype=float)))


def test_matrix_round_trip():
    a = np.arange(6.0).reshape(2, 3)
    mat = la.Matrix(a)
    assert mat.shape == (2, 3)
    assert mat[1, 2] == 5.0
    np.testing.assert_array_equal(mat.numpy(), a)
    np.testing.assert_array_equal(np.asarray(mat), a)
    assert la.Matrix(a).id != mat.id


def test_axpby_fuses():
    x, y = m([[1, 2], [3, 4]]), m([[5, 6], [7, 8]])
    e = 0.4 * x + 0.6 * y
    assert la.rule_log(e) == ["R1"]
    np.testing.assert_allclose(la.evaluate(e), [[3.4, 4.4], [5.4, 6.4]], rtol=1e-15)
    _, _, opt, _ = la.traced(e)
    _, _, naive, _ = la.traced(e, naive=True)
    assert opt["allocations"] == 1
    assert naive["allocations"] == 3


def test_rules_and_values():
    a, b = m([[1, 2], [3, 4]]), m([[5, 6], [7, 8]])
    assert la.evaluate(la.trace(a @ b))[0, 0] == 69
    assert "R5" in la.rule_log(la.trace(a @ b))
    np.testing.assert_array_equal(la.evaluate(la.diagmat(a @ b)), [[19, 0], [0, 50]])
    np.testing.assert_array_equal(la.evaluate(a @ a.T), [[5, 11], [11, 25]])
    assert "R8" in la.rule_log(a @ a.T)

    d, rhs = m([[2, 0], [0, 4]]), m([[2], [8]])
    p = la.plan(la.inv(d) @ rhs)
    assert p["rules"][0] == "R9"
    assert "explicit_inverse" not in p["kernels"]
    np.testing.assert_array_equal(la.evaluate(la.inv(d) @ rhs), [[1], [2]])


def test_matches_numpy():
    rng = np.random.default_rng(0)
    A = rng.random((30, 30)) + 30 * np.eye(30)
    B = rng.random((30, 20))
    a, b = m(A), m(B)
    np.testing.assert_allclose(la.evaluate(la.solve(a, b)), np.linalg.solve(A, B), rtol=1e-10)
    np.testing.assert_allclose(la.evaluate(a @ b), A @ B, rtol=1e-12)
    np.testing.assert_allclose(la.evaluate(la.col(a, 3) - la.row(a, 2).T), (A[:, 3] - A[2, :])[:, None])


def test_trace_text():
    rng = np.random.default_rng(1)
    a, b = m(rng.random((6, 6))), m(rng.random((6, 1)))
    _, events, counters, text = la.traced(la.solve(a @ a.T, b))
    assert "detect: SQUARE" in text and "kernel: syrk" in text
    assert counters["kernel_calls"] == sum(1 for e in events if e[1] == "kernel")
    assert text.splitlines()[0].startswith("0001: ")


def test_errors():
    a, w = m([[1, 2], [3, 4]]), m([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(la.ConformanceError, match="Add: shapes 2x2 and 2x3"):
        la.validate(a + w)
    with pytest.raises(la.SingularityError):
        la.evaluate(la.inv(m([[1, 2], [2, 4]])))
    with pytest.raises(la.ConformanceError, match="column 5"):
        la.evaluate(la.col(a, 5))


def test_structure():
    s = la.analyze_structure(la.Matrix(np.eye(3)))
    assert s["is_symmetric"] and s["is_upper_triangular"] and s["lower_bandwidth"] == 0


def test_bench_report():
    csv = la.run_bench([1, 7], [16], runs=2, format="csv")
    assert csv.startswith("expr_id,size,mode,mean_seconds,flops,allocations,runs\n")
    assert len(csv.strip().splitlines()) == 5
