#pragma once

// Naive bounded evaluator over all fourteen interval modalities and both
// atom kinds. Every quantified interval (temporal or epistemic) has length
// at most `bound`. Backward modalities are read off the anchored path:
// in the unravelled model, an interval's past is exactly its history.
// Where a jump lands on an interval whose history is not determined (K, C,
// L) and the operand looks backwards, every history with at most `bound`
// fresh configurations is tried; otherwise one shortest history is used.
//
// Atoms are decided by derivative matching, never by the compiled DFAs,
// and paths are enumerated directly from t^G.

#include <cstdint>

#include "ehs/core.hpp"

namespace ehs {

struct OracleStats {
  std::uint64_t evaluations = 0;
  std::uint64_t intervals = 0;
};

// Throws IntervalError if the anchor is not a path from g_0 or if
// |interval| > bound.
bool oracle_check(const InterpretedSystem& sys, const AnchoredInterval& a, const Formula& f, std::size_t bound,
                  OracleStats* stats = nullptr);

// Anchored at a shortest history of I's first configuration.
bool oracle_check(const InterpretedSystem& sys, const Interval& I, const Formula& f, std::size_t bound,
                  OracleStats* stats = nullptr);

}  // namespace ehs
