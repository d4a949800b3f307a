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

#include <cstdint>
#include <exception>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace lazyla {

enum class EventKind { kernel, rule, alloc, free, detect };

std::string_view to_string(EventKind kind);

struct TraceEvent {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kernel;
  std::string name;
  std::string detail;
};

struct Counters {
  std::uint64_t flops = 0;
  std::uint64_t allocations = 0;
  std::uint64_t kernel_calls = 0;

  void reset() { *this = Counters{}; }
};

/// Receives instrumentation for one evaluation. Collectors are installed per
/// thread with `CollectorScope`; with none installed every hook is a no-op.
class Collector {
 public:
  /// When false only the counters are updated and no events are stored.
  explicit Collector(bool keep_events = true) : keep_events_(keep_events) {}

  void record(EventKind kind, std::string name, std::string detail);
  void add_flops(std::uint64_t n) { counters_.flops += n; }

  const std::vector<TraceEvent>& events() const { return events_; }
  const Counters& counters() const { return counters_; }
  bool keeps_events() const { return keep_events_; }

  std::vector<TraceEvent> take_events() { return std::move(events_); }

 private:
  bool keep_events_;
  std::uint64_t next_seq_ = 1;
  std::vector<TraceEvent> events_;
  Counters counters_;
};

/// Installs `collector` as the current thread's sink until destruction.
class CollectorScope {
 public:
  explicit CollectorScope(Collector& collector);
  ~CollectorScope();
  CollectorScope(const CollectorScope&) = delete;
  CollectorScope& operator=(const CollectorScope&) = delete;

 private:
  Collector* previous_;
};

namespace instrument {

Collector* current() noexcept;

inline bool active() noexcept { return current() != nullptr; }

// Detail strings are produced lazily so that the default (no collector)
// path never formats anything.
template <class DetailFn>
void kernel(std::string_view name, std::uint64_t flops, DetailFn&& detail) {
  if (Collector* c = current()) {
    c->add_flops(flops);
    c->record(EventKind::kernel, std::string(name),
              c->keeps_events() ? std::string(detail()) : std::string());
  }
}

void rule(std::string_view name, std::string detail = {});
void detect(std::string_view name, std::string detail = {});
void alloc(std::uint64_t id, std::size_t rows, std::size_t cols);
void release(std::uint64_t id, std::size_t rows, std::size_t cols);

}  // namespace instrument

template <class T>
struct Traced {
  T result;
  std::vector<TraceEvent> events;
  Counters counters;
};

/// Attached (via std::throw_with_nested) to an exception escaping
/// `with_trace`, carrying whatever was recorded before the failure.
/// Polymorphic so std::rethrow_if_nested can reach the original error.
struct TraceAttachment {
  TraceAttachment(std::vector<TraceEvent> e, Counters c)
      : events(std::move(e)), counters(c) {}
  virtual ~TraceAttachment() = default;

  std::vector<TraceEvent> events;
  Counters counters;
};

/// Runs `thunk` under a fresh collector.
template <class F>
auto with_trace(F&& thunk) -> Traced<std::invoke_result_t<F>> {
  Collector collector;
  try {
    CollectorScope scope(collector);
    auto result = std::forward<F>(thunk)();
    return {std::move(result), collector.take_events(), collector.counters()};
  } catch (...) {
    std::throw_with_nested(
        TraceAttachment{collector.take_events(), collector.counters()});
  }
}

/// One line per event: "{seq:04}: {kind}: {name} [{detail}]".
std::string render_trace(const std::vector<TraceEvent>& events);

}  // namespace lazyla
