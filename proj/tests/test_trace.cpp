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


#include <algorithm>
#include <cstring>
#include <map>
#include <string>

#include "doctest.h"
#include "lazyla/bench.hpp"
#include "lazyla/error.hpp"
#include "lazyla/lazyla.hpp"
#include "support/oracle.hpp"

using namespace lazyla;

namespace {

DenseMatrix m22(double a, double b, double c, double d) {
  return make_matrix(2, 2, fill::Values{{a, c, b, d}});
}

std::size_t find_line(const std::string& text, const std::string& needle) {
  return text.find(needle);
}

}  // namespace

TEST_SUITE("trace") {

TEST_CASE("render format") {
  CHECK(render_trace({}).empty());
  const TraceEvent e{1, EventKind::kernel, "fused_axpby_n", "2x2, terms=2"};
  CHECK(render_trace({e}) == "0001: kernel: fused_axpby_n [2x2, terms=2]\n");
}

TEST_CASE("the optimised axpby runs one kernel") {
  const auto x = m22(1, 2, 3, 4), y = m22(5, 6, 7, 8);
  const auto t = with_trace([&] { return evaluate(0.4 * Expr(x) + 0.6 * Expr(y)); });
  const auto kernels = std::count_if(t.events.begin(), t.events.end(), [](const TraceEvent& e) {
    return e.kind == EventKind::kernel;
  });
  CHECK(kernels == 1);
  CHECK(t.counters.allocations == 1);
  CHECK(render_trace(t.events).find("kernel: fused_axpby_n [2x2, terms=2]") != std::string::npos);

  const auto n = with_trace([&] { return naive_evaluate(0.4 * Expr(x) + 0.6 * Expr(y)); });
  CHECK(n.counters.allocations == 3);
}

TEST_CASE("solving with a computed Gram matrix") {
  oracle::Rng rng(5);
  auto a = oracle::random_matrix(6, 6, rng);
  const auto b = oracle::random_matrix(6, 1, rng);
  const auto t = with_trace([&] { return evaluate(solve(Expr(a) * transpose(a), b)); });
  const std::string text = render_trace(t.events);
  INFO(text);
  const auto square = find_line(text, "detect: SQUARE");
  const auto syrk = find_line(text, "kernel: syrk");
  REQUIRE(square != std::string::npos);
  REQUIRE(syrk != std::string::npos);
  CHECK(syrk < square);
  // The full ladder is walked for a dense symmetric matrix.
  std::size_t last = square;
  for (const char* step : {"detect: BAND", "detect: TRIU", "detect: TRIL", "detect: SYM"}) {
    const auto at = text.find(step, last);
    CHECK(at != std::string::npos);
    last = at;
  }
  CHECK(text.find("kernel: lu_solve", last) != std::string::npos);
  CHECK(text.find("rule: R10:SYM-DETECTED") != std::string::npos);
}

TEST_CASE("rule lines come before kernel lines") {
  const auto a = m22(2, 0, 0, 4);
  const auto b = make_matrix(2, 1, fill::Values{{2, 8}});
  const auto t = with_trace([&] { return evaluate(inv(a) * b); });
  const std::string text = render_trace(t.events);
  const auto r9 = text.find("rule: R9");
  REQUIRE(r9 != std::string::npos);
  CHECK(r9 < text.find("kernel: "));
}

TEST_CASE("sequence numbers increase") {
  const auto e = bench::build_expression(6, 24, 1);
  const auto t = with_trace([&] { return evaluate(e.tree); });
  REQUIRE(!t.events.empty());
  for (std::size_t i = 0; i < t.events.size(); ++i) CHECK(t.events[i].seq == i + 1);
}

TEST_CASE("counters agree with events and allocations balance") {
  for (int id = 1; id <= bench::kExpressionCount; ++id) {
    const auto e = bench::build_expression(id, 20, 2);
    for (bool naive : {false, true}) {
      INFO("expression ", id, naive ? " naive" : " optimised");
      std::uint64_t result_id = 0;
      const auto t = with_trace([&] {
        auto m = naive ? naive_evaluate(e.tree) : evaluate(e.tree);
        result_id = m.id();
        return m;
      });
      std::uint64_t kernel_events = 0;
      std::map<std::string, int> live;
      for (const auto& ev : t.events) {
        if (ev.kind == EventKind::kernel) ++kernel_events;
        const std::string key = ev.detail.substr(ev.detail.find('#') + 1);
        if (ev.kind == EventKind::alloc) ++live[key];
        if (ev.kind == EventKind::free) --live[key];
      }
      CHECK(t.counters.kernel_calls == kernel_events);
      for (const auto& [id_text, count] : live) {
        CHECK(count == (id_text == std::to_string(result_id) ? 1 : 0));
      }
    }
  }
}

TEST_CASE("tracing does not change results") {
  for (int id = 1; id <= bench::kExpressionCount; ++id) {
    const auto e = bench::build_expression(id, 30, 4);
    const auto plain = evaluate(e.tree);
    const auto traced = with_trace([&] { return evaluate(e.tree); });
    CHECK(std::memcmp(plain.data(), traced.result.data(), plain.n_elem() * sizeof(double)) == 0);
    const auto plain_naive = naive_evaluate(e.tree);
    const auto traced_naive = with_trace([&] { return naive_evaluate(e.tree); });
    CHECK(std::memcmp(plain_naive.data(), traced_naive.result.data(),
                      plain_naive.n_elem() * sizeof(double)) == 0);
  }
}

TEST_CASE("errors carry the partial trace") {
  const auto a = m22(1, 2, 2, 4);
  const auto b = make_matrix(2, 1, fill::Values{{1, 1}});
  try {
    (void)with_trace([&] { return evaluate(solve(Expr(a) * a, b)); });
    FAIL("expected an error");
  } catch (const TraceAttachment& attached) {
    CHECK(!attached.events.empty());
    CHECK(attached.counters.kernel_calls >= 1);
    try {
      std::rethrow_if_nested(attached);
      FAIL("expected a nested error");
    } catch (const SingularityError&) {
    }
  }
}

TEST_CASE("no collector, no overhead path") {
  CHECK_FALSE(instrument::active());
  const auto x = m22(1, 2, 3, 4);
  CHECK(to_values(evaluate(2.0 * Expr(x))) == std::vector<double>{2, 6, 4, 8});
}

}  // TEST_SUITE
