#pragma once

// Bounded-semantics checker for the A, Bbar, L, N fragment with knowledge
// operators. Existential temporal quantifiers range over successors no
// longer than |I| + bound(operand). When the operand is modal-free the
// quantifier is instead decided exactly by reachability in the product of
// t^G with the labelling DFAs, which needs no bound at all.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ehs/core.hpp"

namespace ehs {

struct BoundMode {
  enum class Kind { Paper, User, Tight };
  Kind kind = Kind::Paper;
  std::uint64_t k = 0;  // User only

  static BoundMode paper() { return {Kind::Paper, 0}; }
  static BoundMode user(std::uint64_t k);  // throws Error for k == 0
  static BoundMode tight() { return {Kind::Tight, 0}; }
};

std::string to_string(const BoundMode& m);

struct AblnOptions {
  BoundMode mode = BoundMode::paper();
  // Largest number of candidate intervals a single bounded search may
  // enumerate; above it the check fails with BoundInfeasible.
  std::uint64_t frontier_ceiling = 10'000'000;
};

struct AblnStats {
  std::uint64_t evaluations = 0;       // (subformula, interval) pairs decided
  std::uint64_t witness_searches = 0;  // product-graph searches
  std::uint64_t enumerated = 0;        // intervals visited by bounded searches
  std::uint64_t largest_frontier = 0;  // largest estimated search
  // Longest witness found, measured as |J| for A, L, N and as the number of
  // added configurations for Bbar.
  std::size_t max_witness_extent = 0;
};

struct Verdict {
  bool holds = false;
  // True when every bounded search used at least the f^IS bound of its
  // operand (or was replaced by the exact product search).
  bool conclusive = true;
  // Smallest insufficient bound used, when not conclusive.
  std::uint64_t bounded_at = 0;
  AblnStats stats;

  std::string regime() const;  // "Conclusive" or "BoundedAt(k)"
};

// Throws FragmentError outside the fragment (or for regex atoms),
// IntervalError for an invalid interval and BoundInfeasible when a search
// would exceed the frontier ceiling.
Verdict check_abln(const InterpretedSystem& sys, const Interval& I, const Formula& f, const AblnOptions& opts = {});

// Where a witness may start: at one of `starts` (as a fresh interval), or
// as a proper extension of `prefix`.
struct StartConstraint {
  enum class Kind { StartsAt, Extends };
  Kind kind = Kind::StartsAt;
  std::vector<ConfigId> starts;
  Interval prefix;

  static StartConstraint starts_at(std::vector<ConfigId> gs);
  static StartConstraint extends(Interval I);
};

// A shortest interval meeting the constraint that satisfies the modal-free
// operand (ties broken by configuration ids). Throws FragmentError if the
// operand has modalities or regex atoms.
std::optional<Interval> regular_witness_search(const InterpretedSystem& sys, const StartConstraint& where,
                                               const Formula& operand);

// Number of states of the product searched above: reachable configurations
// times DFA state vectors times the point flag, over the pairs actually
// reachable from g_0. No shortest witness is longer than this.
std::size_t product_size(const InterpretedSystem& sys);

// Modal context tree, cut at a horizon.
struct Mct {
  ConfigId first = 0;
  ConfigId last = 0;
  bool point = false;
  std::vector<std::uint32_t> states;  // DFA state per variable after g(I)
  // Per top-level subformula (by its text): the distinct child trees,
  // sorted by key.
  std::map<std::string, std::vector<Mct>> children;
  std::string key;  // canonical form; equal trees have equal keys

  friend bool operator==(const Mct& a, const Mct& b) { return a.key == b.key; }
  std::size_t num_nodes() const;
};

// Children of an A, L or N edge are the related intervals of length at most
// `horizon`; of a Bbar edge, the extensions by at most `horizon`
// configurations; epistemic edges keep the length. Throws FragmentError
// outside the fragment.
Mct compute_mct(const InterpretedSystem& sys, const Interval& I, const Formula& f, std::size_t horizon);

std::string to_dot(const InterpretedSystem& sys, const Mct& t, std::string_view graph_name = "mct");

}  // namespace ehs
