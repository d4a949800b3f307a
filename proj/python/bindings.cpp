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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "lazyla/bench.hpp"
#include "lazyla/lazyla.hpp"

namespace py = pybind11;
using namespace lazyla;

namespace {

using MatrixPtr = std::shared_ptr<DenseMatrix>;

// Expression plus the matrices its leaves point at, so Python can drop its
// own references without leaving the tree dangling.
struct PyExpr {
  Expr expr;
  std::vector<MatrixPtr> keep;
};

PyExpr leaf(const MatrixPtr& m) { return {Expr(*m), {m}}; }

std::vector<MatrixPtr> merged(const PyExpr& a, const PyExpr& b) {
  std::vector<MatrixPtr> out = a.keep;
  out.insert(out.end(), b.keep.begin(), b.keep.end());
  return out;
}

PyExpr unary(const PyExpr& a, Expr (*f)(const Expr&)) { return {f(a.expr), a.keep}; }

MatrixPtr from_array(py::array_t<double, py::array::forcecast> arr) {
  if (arr.ndim() == 1) arr = arr.reshape({arr.shape(0), py::ssize_t{1}});
  if (arr.ndim() != 2) throw DimensionError("expected a 1-D or 2-D array");
  const auto r = static_cast<std::size_t>(arr.shape(0));
  const auto c = static_cast<std::size_t>(arr.shape(1));
  auto m = std::make_shared<DenseMatrix>(r, c);
  auto v = arr.unchecked<2>();
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < r; ++i) (*m)(i, j) = v(i, j);
  }
  return m;
}

py::array_t<double> to_array(const DenseMatrix& m) {
  // Column-major strides, copied once into a NumPy-owned buffer.
  py::array_t<double> out({m.n_rows(), m.n_cols()},
                          {sizeof(double), sizeof(double) * m.n_rows()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

py::tuple shape_tuple(const Shape& s) { return py::make_tuple(s.n_rows, s.n_cols); }

py::list events_list(const std::vector<TraceEvent>& events) {
  py::list out;
  for (const auto& e : events) {
    out.append(py::make_tuple(e.seq, std::string(to_string(e.kind)), e.name, e.detail));
  }
  return out;
}

py::dict counters_dict(const Counters& c) {
  py::dict d;
  d["flops"] = c.flops;
  d["allocations"] = c.allocations;
  d["kernel_calls"] = c.kernel_calls;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lazyla, m) {
  m.doc() = "Delayed-evaluation dense linear algebra with rewrite rules";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<ConformanceError> conformance(m, "ConformanceError", base.ptr());
  static py::exception<SingularityError> singular(m, "SingularityError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConformanceError& e) {
      py::set_error(conformance, e.what());
    } catch (const SingularityError& e) {
      py::set_error(singular, e.what());
    } catch (const IndexError& e) {
      PyErr_SetString(PyExc_IndexError, e.what());
    } catch (const UsageError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<DenseMatrix, MatrixPtr>(m, "Matrix")
      .def(py::init(&from_array), py::arg("values"))
      .def_static("zeros", [](std::size_t r, std::size_t c) {
        return std::make_shared<DenseMatrix>(make_matrix(r, c, fill::Zeros{}));
      })
      .def_static("identity", [](std::size_t n) {
        return std::make_shared<DenseMatrix>(make_matrix(n, n, fill::Identity{}));
      })
      .def_static("uniform", [](std::size_t r, std::size_t c, std::uint64_t seed) {
        return std::make_shared<DenseMatrix>(make_matrix(r, c, fill::Uniform{seed}));
      }, py::arg("n_rows"), py::arg("n_cols"), py::arg("seed"))
      .def_property_readonly("shape", [](const DenseMatrix& d) {
        return py::make_tuple(d.n_rows(), d.n_cols());
      })
      .def_property_readonly("id", &DenseMatrix::id)
      .def("numpy", &to_array)
      .def("__array__", [](const DenseMatrix& d, py::args, py::kwargs) { return to_array(d); })
      .def("__getitem__", [](const DenseMatrix& d, std::pair<std::size_t, std::size_t> ij) {
        return d.at(ij.first, ij.second);
      })
      .def("__repr__", [](const DenseMatrix& d) {
        return "Matrix(" + std::to_string(d.n_rows()) + "x" + std::to_string(d.n_cols()) +
               ", id=" + std::to_string(d.id()) + ")";
      });

  m.def("analyze_structure", [](const DenseMatrix& d) {
    const auto s = analyze_structure(d);
    py::dict out;
    out["is_square"] = s.is_square;
    out["lower_bandwidth"] = s.lower_bandwidth;
    out["upper_bandwidth"] = s.upper_bandwidth;
    out["is_upper_triangular"] = s.is_upper_triangular;
    out["is_lower_triangular"] = s.is_lower_triangular;
    out["is_symmetric"] = s.is_symmetric;
    return out;
  });

  py::class_<PyExpr>(m, "Expr")
      .def(py::init(&leaf), py::arg("matrix"))
      .def("__add__", [](const PyExpr& a, const PyExpr& b) { return PyExpr{a.expr + b.expr, merged(a, b)}; })
      .def("__sub__", [](const PyExpr& a, const PyExpr& b) { return PyExpr{a.expr - b.expr, merged(a, b)}; })
      .def("__matmul__", [](const PyExpr& a, const PyExpr& b) { return PyExpr{a.expr * b.expr, merged(a, b)}; })
      .def("__mul__", [](const PyExpr& a, double s) { return PyExpr{a.expr * s, a.keep}; })
      .def("__rmul__", [](const PyExpr& a, double s) { return PyExpr{s * a.expr, a.keep}; })
      .def("__neg__", [](const PyExpr& a) { return PyExpr{-1.0 * a.expr, a.keep}; })
      .def_property_readonly("T", [](const PyExpr& a) { return unary(a, &transpose); })
      .def_property_readonly("shape", [](const PyExpr& a) { return shape_tuple(infer_shape(a.expr)); })
      .def("__repr__", [](const PyExpr& a) { return render(a.expr); });
  py::implicitly_convertible<DenseMatrix, PyExpr>();

  m.def("transpose", [](const PyExpr& a) { return unary(a, &transpose); });
  m.def("inv", [](const PyExpr& a) { return unary(a, &inv); });
  m.def("diagmat", [](const PyExpr& a) { return unary(a, &diagmat); });
  m.def("trace", [](const PyExpr& a) { return unary(a, &trace); });
  m.def("as_scalar", [](const PyExpr& a) { return unary(a, &as_scalar); });
  m.def("solve", [](const PyExpr& a, const PyExpr& b) {
    return PyExpr{solve(a.expr, b.expr), merged(a, b)};
  });
  m.def("col", [](const PyExpr& a, std::size_t j) { return PyExpr{col(a.expr, j), a.keep}; });
  m.def("row", [](const PyExpr& a, std::size_t i) { return PyExpr{row(a.expr, i), a.keep}; });

  m.def("validate", [](const PyExpr& e) { validate(e.expr); });
  m.def("render", [](const PyExpr& e) { return render(e.expr); });
  m.def("evaluate", [](const PyExpr& e) { return to_array(evaluate(e.expr)); },
        "Rewrite then execute.");
  m.def("naive_evaluate", [](const PyExpr& e) { return to_array(naive_evaluate(e.expr)); },
        "Eager evaluation, one temporary per node.");
  m.def("rule_log", [](const PyExpr& e) { return rewrite(e.expr).rule_log; });
  m.def("plan", [](const PyExpr& e) {
    const Plan p = rewrite(e.expr);
    std::vector<std::string> kernels;
    for (const auto& s : p.steps) kernels.emplace_back(to_string(s.kernel));
    py::dict out;
    out["rules"] = p.rule_log;
    out["kernels"] = kernels;
    out["shape"] = shape_tuple(p.output_shape);
    out["text"] = to_string(p);
    return out;
  });
  m.def("traced", [](const PyExpr& e, bool naive) {
    auto t = with_trace([&] { return naive ? naive_evaluate(e.expr) : evaluate(e.expr); });
    return py::make_tuple(to_array(t.result), events_list(t.events),
                          counters_dict(t.counters), render_trace(t.events));
  }, py::arg("expr"), py::arg("naive") = false,
        "Evaluate under a fresh collector: (result, events, counters, text).");

  m.def("run_bench", [](std::vector<int> ids, std::vector<std::size_t> sizes,
                        std::size_t runs, std::uint64_t seed, const std::string& mode,
                        const std::string& format) {
    bench::BenchOptions o{std::move(ids), std::move(sizes), runs, seed,
                          mode == "naive"       ? bench::ModeSelection::naive
                          : mode == "optimised" ? bench::ModeSelection::optimised
                                                : bench::ModeSelection::both};
    if (mode != "naive" && mode != "optimised" && mode != "both") {
      throw UsageError("mode must be naive, optimised or both");
    }
    const auto records = bench::run_bench(o);
    return bench::report(records, format == "csv" ? bench::Format::csv : bench::Format::markdown);
  }, py::arg("expr_ids"), py::arg("sizes"), py::arg("runs") = 100, py::arg("seed") = 42,
        py::arg("mode") = "both", py::arg("format") = "markdown");
}
