#pragma once

// Interval relations over a system: the forward Allen relations used by the
// decision procedures, and the epistemic indistinguishability relations.
//
// Every enumeration yields intervals in ascending length, then
// lexicographic order of configuration ids, without duplicates.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ehs/system.hpp"

namespace ehs {

enum class Relation { A, B, Bbar, D, E, N };

std::string_view to_string(Relation r);

// Whether the relation has unboundedly many successors (needs max_len).
bool is_unbounded(Relation r);

// Return false from the visitor to stop the enumeration.
using IntervalVisitor = std::function<bool(const Interval&)>;

// Visits every I' with I R I' (and |I'| <= max_len for A, Bbar, N).
// Returns false iff the visitor stopped early. Throws Error when max_len is
// missing for an unbounded relation.
bool for_each_allen_successor(const InterpretedSystem& sys, const Interval& I, Relation r,
                              std::optional<std::size_t> max_len, const IntervalVisitor& visit);
std::vector<Interval> allen_successors(const InterpretedSystem& sys, const Interval& I, Relation r,
                                       std::optional<std::size_t> max_len = std::nullopt);

// Configurations reachable from g by at least one t^G step, ascending.
std::vector<ConfigId> strictly_reachable_from(const InterpretedSystem& sys, ConfigId g);

// I R_L I': first(I') is reachable from last(I) by at least one step.
bool for_each_later_successor(const InterpretedSystem& sys, const Interval& I, std::size_t max_len,
                              const IntervalVisitor& visit);
std::vector<Interval> later_successors(const InterpretedSystem& sys, const Interval& I, std::size_t max_len);

// Paths p with first(p) in `starts` and 1 <= |p| <= max_len, appended to
// `prefix`. `starts` must be ascending.
bool for_each_path(const InterpretedSystem& sys, const std::vector<ConfigId>& prefix,
                   const std::vector<ConfigId>& starts, std::size_t max_len, const IntervalVisitor& visit);

bool epi_equiv(const InterpretedSystem& sys, const Interval& I, const Interval& J, std::size_t agent);

// All intervals J with J ~_agent I (same length, pointwise equal local state,
// first configuration reachable).
std::vector<Interval> epi_class(const InterpretedSystem& sys, const Interval& I, std::size_t agent);

// Closure of {I} under ~_i for i in the group.
std::vector<Interval> common_class(const InterpretedSystem& sys, const Interval& I,
                                   const std::vector<std::size_t>& group);

}  // namespace ehs
