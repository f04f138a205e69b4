#pragma once

// Formulas of the epistemic interval logic, in two flavours: atoms are
// variables (labelled by regular languages in the system), or regular
// expressions over letter predicates (for point-based systems).
//
//   f ::= true | false | pi | p | {regex} | !f | f & f | f | f | f -> f
//       | <X> f | [X] f | K{i} f | C{i,j,...} f
//
// X ranges over A B D E L N O and their inverses Abar ... Obar.

#include <compare>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehs/regex.hpp"

namespace ehs {

enum class Modality { A, Abar, B, Bbar, D, Dbar, E, Ebar, L, Lbar, N, Nbar, O, Obar };

inline constexpr Modality kAllModalities[] = {Modality::A, Modality::Abar, Modality::B, Modality::Bbar,
                                              Modality::D, Modality::Dbar, Modality::E, Modality::Ebar,
                                              Modality::L, Modality::Lbar, Modality::N, Modality::Nbar,
                                              Modality::O, Modality::Obar};

std::string_view to_string(Modality m);
std::optional<Modality> parse_modality(std::string_view name);
// Modalities whose successors lie (partly) before the interval.
bool needs_history(Modality m);

// A letter predicate of a regex atom: p, !p, T (any letter), or an exact
// letter [p,q,...] (the set of variables true at a configuration).
struct Letter {
  enum class Kind { Pos, Neg, Top, Set };
  Kind kind = Kind::Top;
  std::vector<std::string> vars;  // one for Pos/Neg, sorted for Set

  static Letter pos(std::string v) { return {Kind::Pos, {std::move(v)}}; }
  static Letter neg(std::string v) { return {Kind::Neg, {std::move(v)}}; }
  static Letter top() { return {Kind::Top, {}}; }
  static Letter set(std::vector<std::string> vs);

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

std::string to_string(const Letter& l);

using LetterRegex = BasicRegex<Letter>;

std::string to_string(const LetterRegex& r);

enum class Logic { Plus, RE };

class Formula {
 public:
  enum class Kind { True, False, Pi, Var, Atom, Not, And, Or, Implies, Know, Common, Diamond, Box };

  static Formula truth();
  static Formula falsity();
  static Formula pi();
  static Formula var(std::string name);
  static Formula atom(LetterRegex r);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  // Agents are kept as written: indices ("0") or names ("env").
  static Formula know(std::string agent, Formula f);
  static Formula common(std::vector<std::string> agents, Formula f);
  static Formula diamond(Modality m, Formula f);
  static Formula box(Modality m, Formula f);

  Formula() : Formula(truth()) {}

  Kind kind() const noexcept { return n_->kind; }
  const std::string& name() const { return n_->name; }
  const LetterRegex& regex() const { return n_->regex; }
  const std::vector<std::string>& agents() const { return n_->agents; }
  Modality modality() const { return n_->mod; }
  const Formula& child(std::size_t i = 0) const { return n_->kids.at(i); }
  std::size_t arity() const noexcept { return n_->kids.size(); }

  bool is_binary() const noexcept { return n_->kids.size() == 2; }
  bool is_modal() const noexcept;  // K, C, <X>, [X]
  bool is_temporal() const noexcept { return kind() == Kind::Diamond || kind() == Kind::Box; }

  // Number of AST nodes (a regex atom counts as one).
  std::size_t size() const;
  std::size_t modal_depth() const;
  bool modal_free() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind = Kind::True;
    std::string name = {};
    LetterRegex regex = {};
    std::vector<std::string> agents = {};
    Modality mod = Modality::A;
    std::vector<Formula> kids = {};
  };
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> n_;
};

// Parse errors carry a byte position into `text`.
Formula parse_formula(std::string_view text, Logic logic);
inline Formula parse_plus(std::string_view text) { return parse_formula(text, Logic::Plus); }
inline Formula parse_re(std::string_view text) { return parse_formula(text, Logic::RE); }

// Binary operands are always parenthesised, so parse(to_string(f)) == f.
std::string to_string(const Formula& f);

bool uses_regex_atoms(const Formula& f);
// Variables mentioned by Var atoms and letter predicates, in first-use order.
std::vector<std::string> variables_of(const Formula& f);

// Replaces every variable and regex atom by fn(leaf), keeping the rest of
// the structure (including sugar) intact.
Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn);

// Rewrite false, |, ->, [X] into true, !, &, <X>; collapses double negation.
Formula normalize(const Formula& f);

// <L>f == <A>(!pi & <A>f); boxes dualised.
Formula eliminate_L(const Formula& f);

// <N>f == <A>(!pi & [B][B]false & <A>f). With `literal`, uses
// <B><B>false instead of [B][B]false for the middle conjunct.
Formula expand_N(const Formula& f, bool literal = false);

enum class Fragment { BDE, ABLN, Full };
std::string_view to_string(Fragment fr);

// Modal-free formulas (and purely epistemic ones) classify as BDE.
Fragment fragment_of(const Formula& f);
bool in_bde(const Formula& f);
bool in_abln(const Formula& f);

// The modal subformulas of normalize(f) not in the scope of any modality,
// left to right, duplicates collapsed. Each is a Know, Common or Diamond node.
std::vector<Formula> top_level_subformulas(const Formula& f);

}  // namespace ehs
