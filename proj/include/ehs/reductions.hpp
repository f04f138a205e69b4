#pragma once

// Translations between variables labelled by regular languages and regex
// atoms over point-based systems. Both directions preserve the verdict at
// every interval.

#include <string>
#include <utility>

#include "ehs/formula.hpp"
#include "ehs/system.hpp"

namespace ehs {

// The expression over configurations obtained by replacing each letter of
// `r` with the configurations it holds at: p by the configurations in λ(p),
// !p by the rest, T by all of them, [p,q] by those where exactly p and q
// hold. Throws ModelError unless every variable involved is point-based,
// UnknownSymbolError for unknown variables.
RegexExpr lambda_compose(const InterpretedSystem& sys, const LetterRegex& r);

struct Translation {
  InterpretedSystem system;
  Formula formula;
};

// One variable v_<alias> per reachable configuration, true exactly at its
// point interval; every variable p of `f` becomes the atom λ(p) spelled
// with those variables (unreachable configurations become empty). Throws
// FragmentError if `f` already has regex atoms.
Translation to_point_based(const InterpretedSystem& sys, const Formula& f);

// One variable q_<hash> per distinct atom r of `f`, labelled by
// lambda_compose(sys, r); the original variables are kept. Throws ModelError
// if some labelling is not point-based.
Translation to_regular_labelling(const InterpretedSystem& sys, const Formula& f);

// Identifier-safe form of a configuration name: "(l0,l1)" -> "l0_l1".
std::string sanitize_name(std::string_view name);

// Fresh variable name for an atom: "q_" + 16 hex digits of FNV-1a.
std::string atom_variable(const LetterRegex& r);

}  // namespace ehs
