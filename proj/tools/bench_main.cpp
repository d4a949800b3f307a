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


// bench: times the ten expressions under naive and optimised evaluation.
//
//   bench --expr 1,2,...|all --sizes 100,250,500,1000 --runs N --seed S
//         --mode naive|optimised|both --format markdown|csv --out PATH
//
// Exit status: 0 success, 2 usage error, 3 naive/optimised mismatch.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lazyla/bench.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kMismatch = 3;

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  for (const auto& item : split(s)) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v <= 0) {
      throw lazyla::UsageError(std::string("bad ") + what + " '" + item + "'");
    }
    out.push_back(static_cast<T>(v));
  }
  if (out.empty()) throw lazyla::UsageError(std::string("empty ") + what);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lazyla::bench;

  CLI::App app{"Naive vs optimised evaluation benchmark"};
  std::string exprs = "all";
  std::string sizes = "100,250,500,1000";
  std::size_t runs = 100;
  bool full_runs = false;
  std::uint64_t seed = 42;
  ModeSelection mode = ModeSelection::both;
  Format format = Format::markdown;
  std::string out_path;

  const std::map<std::string, ModeSelection> modes{
      {"naive", ModeSelection::naive},
      {"optimised", ModeSelection::optimised},
      {"both", ModeSelection::both}};
  const std::map<std::string, Format> formats{{"markdown", Format::markdown},
                                              {"csv", Format::csv}};

  app.add_option("--expr", exprs, "Comma-separated ids 1..10, or 'all'");
  app.add_option("--sizes", sizes, "Comma-separated matrix sizes (>= 4)");
  app.add_option("--runs", runs, "Timed runs per arm")
      ->check(CLI::PositiveNumber);
  app.add_flag("--full-runs", full_runs, "Use 1000 runs per arm");
  app.add_option("--seed", seed, "Operand seed");
  app.add_option("--mode", mode, "naive, optimised or both")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
      ->option_text("naive|optimised|both");
  app.add_option("--format", format, "markdown or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->option_text("markdown|csv");
  app.add_option("--out", out_path, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  BenchOptions options;
  options.runs = full_runs ? 1000 : runs;
  options.seed = seed;
  options.mode = mode;
  try {
    if (exprs == "all") {
      for (int i = 1; i <= kExpressionCount; ++i) options.expr_ids.push_back(i);
    } else {
      options.expr_ids = parse_list<int>(exprs, "expression id");
      for (int id : options.expr_ids) {
        if (id > kExpressionCount) {
          throw lazyla::UsageError("unknown expression id " +
                                   std::to_string(id));
        }
      }
    }
    options.sizes = parse_list<std::size_t>(sizes, "size");
    for (std::size_t m : options.sizes) {
      if (m < 4) throw lazyla::UsageError("sizes must be at least 4");
    }

    const auto records = run_bench(options);
    const std::string text = report(records, format);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "bench: cannot write " << out_path << "\n";
        return kUsageError;
      }
      out << text;
    }
  } catch (const MismatchError& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return kMismatch;
  } catch (const lazyla::UsageError& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return kUsageError;
  }
  return 0;
}
