#pragma once

// Complete minimal DFAs for labelling languages.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ehs/regex.hpp"

namespace ehs {

class Dfa {
 public:
  using State = std::uint32_t;

  // `table[s * |alphabet| + a]` is the successor of state s on symbol a.
  Dfa(std::shared_ptr<const Alphabet> alphabet, State initial, std::vector<bool> accepting,
      std::vector<State> table);

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const std::shared_ptr<const Alphabet>& alphabet_ptr() const noexcept { return alphabet_; }
  std::size_t num_states() const noexcept { return accepting_.size(); }
  State initial() const noexcept { return initial_; }
  bool accepting(State s) const { return accepting_.at(s); }
  std::size_t num_accepting() const;
  State step(State s, Symbol a) const { return table_[static_cast<std::size_t>(s) * alphabet_->size() + a]; }

  State run(std::span<const Symbol> word) const { return run_from(initial_, word); }
  State run_from(State s, std::span<const Symbol> word) const {
    for (Symbol a : word) s = step(s, a);
    return s;
  }
  bool accepts(std::span<const Symbol> word) const { return accepting_[run(word)]; }

  // The rejecting state that loops on every symbol, if any.
  std::optional<State> sink() const;

 private:
  std::shared_ptr<const Alphabet> alphabet_;
  State initial_;
  std::vector<bool> accepting_;
  std::vector<State> table_;
};

// Thompson construction, subset construction (the empty subset is the sink),
// Hopcroft minimisation, then breadth-first renumbering from the initial
// state in symbol order.
Dfa compile(const RegexExpr& expr, std::shared_ptr<const Alphabet> alphabet);

enum class LanguageShape { PointBased, EndpointBased, General };

std::string_view to_string(LanguageShape shape);

LanguageShape language_shape(const Dfa& dfa);

// DOT rendering: states "z<i>", accepting doubled, sink dashed.
std::string to_dot(const Dfa& dfa, std::string_view graph_name = "dfa");

}  // namespace ehs
