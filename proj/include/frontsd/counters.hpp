#pragma once

#include <atomic>
#include <cstdint>

namespace frontsd {

struct CounterSnapshot {
  std::uint64_t evaluations = 0;
  std::uint64_t jacobian_evaluations = 0;
  std::uint64_t dual_solves = 0;
  std::uint64_t linesearch_failures = 0;

  friend bool operator==(const CounterSnapshot&, const CounterSnapshot&) = default;
};

/// Work counters shared by the line searches and drivers; safe under concurrent increments.
struct EvalCounters {
  std::atomic<std::uint64_t> evaluations{0};
  std::atomic<std::uint64_t> jacobian_evaluations{0};
  std::atomic<std::uint64_t> dual_solves{0};
  std::atomic<std::uint64_t> linesearch_failures{0};

  CounterSnapshot snapshot() const {
    return {evaluations.load(), jacobian_evaluations.load(), dual_solves.load(),
            linesearch_failures.load()};
  }
};

inline void bump(std::atomic<std::uint64_t> EvalCounters::*field, EvalCounters* counters) {
  if (counters != nullptr) (counters->*field).fetch_add(1, std::memory_order_relaxed);
}

}  // namespace frontsd
