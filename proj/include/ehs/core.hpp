#pragma once

// Formulas bound to a system: sugar removed (only true, pi, p, {r}, !, &,
// <X>, K, C remain), variables and agents resolved to indices, identical
// subformulas shared. Node ids are stable keys for memo tables.

#include <cstdint>
#include <string>
#include <vector>

#include "ehs/bound.hpp"
#include "ehs/formula.hpp"
#include "ehs/system.hpp"

namespace ehs {

// Letter predicate with variables resolved to indices.
struct BoundLetter {
  Letter::Kind kind = Letter::Kind::Top;
  std::vector<std::size_t> vars;
  friend bool operator==(const BoundLetter&, const BoundLetter&) = default;
};

class CoreFormula {
 public:
  enum class Op { True, Pi, Var, Atom, Not, And, Know, Common, Diamond };

  struct Node {
    Op op = Op::True;
    int a = -1;
    int b = -1;
    std::size_t var = 0;                 // Var
    int atom = -1;                       // Atom: index into atoms()
    std::vector<std::size_t> agents;     // Know (one) / Common
    Modality mod = Modality::A;          // Diamond
    bool history = false;                // subtree uses a backward modality
    std::size_t depth = 0;               // modal depth
    Formula source;                      // normalised subformula
  };

  // Throws ModelError for unknown variables or agents.
  static CoreFormula bind(const Formula& f, const InterpretedSystem& sys);

  int root() const noexcept { return root_; }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const BasicRegex<BoundLetter>& atom(int i) const { return atoms_.at(static_cast<std::size_t>(i)); }
  std::size_t num_atoms() const noexcept { return atoms_.size(); }
  bool modal_free(int id) const { return node(id).depth == 0; }
  std::string to_string(int id) const { return ehs::to_string(node(id).source); }

  // Top-level modal nodes under `id` (through ! and & only), left to right.
  std::vector<int> top_level(int id) const;

 private:
  int add(Node n, const std::string& key);
  int build(const Formula& f, const InterpretedSystem& sys);

  std::vector<Node> nodes_;
  std::vector<BasicRegex<BoundLetter>> atoms_;
  std::vector<std::string> keys_;
  int root_ = -1;
};

std::size_t resolve_agent(const InterpretedSystem& sys, const std::string& agent);

// f^IS(f) = 2|G|^2 * prod_q 2^|Q_q| * 2^(sum of f^IS over the operands of the
// top-level subformulas), over the L-eliminated normal form. |Q_q| is the
// state count of the minimal DFA of q. In tight mode the per-node factor is
// 2|G|^2 * prod_q |Q_q| and 1 is added. Throws FragmentError outside ABLN.
BigBound fis_bound(const InterpretedSystem& sys, const Formula& f, bool tight = false);

// f^IS of the subformula rooted at node `id` (no fragment check).
BigBound fis_bound(const InterpretedSystem& sys, const CoreFormula& c, int id, bool tight = false);

// The node factor above (2|G|^2 prod 2^|Q_q|, or the tight variant).
BigBound::Int fis_base(const InterpretedSystem& sys, bool tight = false);

}  // namespace ehs
