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


#include "lazyla/trace.hpp"

#include <cstdio>

namespace lazyla {

namespace {
thread_local Collector* tls_collector = nullptr;

std::string shape_id(std::uint64_t id, std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "x" + std::to_string(cols) + " #" +
         std::to_string(id);
}
}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kernel:
      return "kernel";
    case EventKind::rule:
      return "rule";
    case EventKind::alloc:
      return "alloc";
    case EventKind::free:
      return "free";
    case EventKind::detect:
      return "detect";
  }
  return "?";
}

void Collector::record(EventKind kind, std::string name, std::string detail) {
  switch (kind) {
    case EventKind::kernel:
      ++counters_.kernel_calls;
      break;
    case EventKind::alloc:
      ++counters_.allocations;
      break;
    default:
      break;
  }
  const std::uint64_t seq = next_seq_++;
  if (keep_events_) {
    events_.push_back({seq, kind, std::move(name), std::move(detail)});
  }
}

CollectorScope::CollectorScope(Collector& collector)
    : previous_(tls_collector) {
  tls_collector = &collector;
}

CollectorScope::~CollectorScope() { tls_collector = previous_; }

namespace instrument {

Collector* current() noexcept { return tls_collector; }

void rule(std::string_view name, std::string detail) {
  if (Collector* c = current()) {
    c->record(EventKind::rule, std::string(name), std::move(detail));
  }
}

void detect(std::string_view name, std::string detail) {
  if (Collector* c = current()) {
    c->record(EventKind::detect, std::string(name), std::move(detail));
  }
}

void alloc(std::uint64_t id, std::size_t rows, std::size_t cols) {
  if (Collector* c = current()) {
    c->record(EventKind::alloc, "matrix",
              c->keeps_events() ? shape_id(id, rows, cols) : std::string());
  }
}

void release(std::uint64_t id, std::size_t rows, std::size_t cols) {
  if (Collector* c = current()) {
    c->record(EventKind::free, "matrix",
              c->keeps_events() ? shape_id(id, rows, cols) : std::string());
  }
}

}  // namespace instrument

std::string render_trace(const std::vector<TraceEvent>& events) {
  std::string out;
  char seq[32];
  for (const auto& e : events) {
    std::snprintf(seq, sizeof seq, "%04llu",
                  static_cast<unsigned long long>(e.seq));
    out += seq;
    out += ": ";
    out += to_string(e.kind);
    out += ": ";
    out += e.name;
    out += " [";
    out += e.detail;
    out += "]\n";
  }
  return out;
}

}  // namespace lazyla
