#pragma once

// Decision procedure for the B, D, E fragment with knowledge operators.
// Plain recursion: universal choices (K, C) are loops that stop at the first
// failure, existential choices (<B>, <D>, <E>) stop at the first witness.
// Every interval visited is at most as long as the input interval.

#include <cstdint>
#include <string>

#include "ehs/core.hpp"

namespace ehs {

struct BdeOptions {
  bool memo = false;   // cache verdicts per (interval, subformula)
  bool trace = false;  // explain a false verdict
};

struct BdeResult {
  bool holds = false;
  std::size_t max_visited_length = 0;
  std::uint64_t visited = 0;
  std::string trace;
};

// Throws FragmentError outside the fragment (or for regex atoms) and
// IntervalError for an invalid interval.
BdeResult check_bde_detailed(const InterpretedSystem& sys, const Interval& I, const Formula& f,
                             const BdeOptions& opts = {});
bool check_bde(const InterpretedSystem& sys, const Interval& I, const Formula& f);

std::string interval_to_string(const InterpretedSystem& sys, const Interval& I);

}  // namespace ehs
