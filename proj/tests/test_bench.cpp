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


#include <string>

#include "doctest.h"
#include "lazyla/bench.hpp"
#include "lazyla/error.hpp"
#include "lazyla/lazyla.hpp"

using namespace lazyla;
using namespace lazyla::bench;

TEST_SUITE("bench") {

TEST_CASE("expression shapes") {
  const auto e1 = build_expression(1, 100, 1);
  CHECK(e1.tree.node().kind() == NodeKind::Add);
  CHECK(e1.tree.node().child(0).kind() == NodeKind::ScalarMul);
  CHECK(e1.tree.node().child(0).scalar() == 0.4);
  CHECK(e1.tree.node().child(1).scalar() == 0.6);
  CHECK(infer_shape(e1.tree) == Shape{100, 100, false});

  const auto e6 = build_expression(6, 100, 1);
  CHECK(infer_shape(e6.tree) == Shape{100, 25, false});

  const auto e7 = build_expression(7, 50, 1);
  CHECK(e7.tree.node().kind() == NodeKind::AsScalar);
  CHECK(infer_shape(e7.tree).is_scalar);

  const auto e10 = build_expression(10, 4, 1);
  CHECK(e10.tree.node().kind() == NodeKind::Solve);
  CHECK_NOTHROW(validate(e10.tree));
  const auto& a = e10.tree.node().child(0).matrix();
  const auto s = analyze_structure(a);
  CHECK(s.lower_bandwidth == 1);
  CHECK(s.upper_bandwidth == 1);

  for (int id = 1; id <= kExpressionCount; ++id) CHECK_NOTHROW(validate(build_expression(id, 4, 9).tree));
  CHECK_THROWS_AS(build_expression(0, 10, 1), UsageError);
  CHECK_THROWS_AS(build_expression(11, 10, 1), UsageError);
  CHECK_THROWS_AS(build_expression(1, 3, 1), UsageError);
}

TEST_CASE("operands are reproducible from the seed") {
  const auto a = build_expression(3, 20, 77);
  const auto b = build_expression(3, 20, 77);
  const auto c = build_expression(3, 20, 78);
  REQUIRE(a.operands.size() == b.operands.size());
  for (std::size_t i = 0; i < a.operands.size(); ++i) {
    CHECK(to_values(*a.operands[i]) == to_values(*b.operands[i]));
  }
  CHECK(to_values(*a.operands[0]) != to_values(*c.operands[0]));
}

TEST_CASE("counters from run_bench") {
  const auto r5 = run_bench({{5}, {100}, 10, 1, ModeSelection::both});
  REQUIRE(r5.size() == 2);
  for (const auto& r : r5) {
    if (r.mode == Mode::naive) CHECK(r.flops == 2000000 + 100);
    else CHECK(r.flops == 20000);
    CHECK(r.runs == 10);
    CHECK(r.mean_seconds >= 0.0);
  }
  const auto r1 = run_bench({{1}, {100}, 1, 1, ModeSelection::naive});
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].allocations == 3);
  CHECK_THROWS_AS(run_bench({{1}, {100}, 0, 1, ModeSelection::naive}), UsageError);
}

TEST_CASE("counter columns are deterministic") {
  const BenchOptions opts{{1, 3, 6, 9, 10}, {16}, 2, 5, ModeSelection::both};
  const auto a = run_bench(opts);
  const auto b = run_bench(opts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].flops == b[i].flops);
    CHECK(a[i].allocations == b[i].allocations);
  }
}

TEST_CASE("report") {
  const std::vector<BenchRecord> pair{{1, 500, Mode::naive, 1e-4, 10, 3, 100},
                                      {1, 500, Mode::optimised, 2.5e-5, 5, 1, 100}};
  CHECK(reduction(pair, 1, 500).value() == doctest::Approx(0.75));
  const auto md = report(pair, Format::markdown);
  CHECK(md.find("75.00%") != std::string::npos);
  CHECK(md.find("1.00e-04") != std::string::npos);
  CHECK(md.find("2.50e-05") != std::string::npos);

  const std::vector<BenchRecord> lone{{2, 100, Mode::naive, 1e-6, 10, 4, 100}};
  CHECK(!reduction(lone, 2, 100).has_value());
  CHECK(report(lone, Format::markdown).find("n/a") != std::string::npos);

  const auto csv = report(pair, Format::csv);
  CHECK(csv.rfind("expr_id,size,mode,mean_seconds,flops,allocations,runs\n", 0) == 0);
  CHECK(csv.find("1,500,naive,1.000000e-04,10,3,100\n") != std::string::npos);
}

}  // TEST_SUITE
