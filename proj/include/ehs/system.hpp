#pragma once

// Interpreted systems with labelling on regular expressions.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ehs/dfa.hpp"
#include "ehs/interval.hpp"
#include "ehs/regex.hpp"

namespace ehs {

using LocalId = std::uint32_t;
using ActionId = std::uint32_t;

// `pattern[j]` constrains the action of agent j; nullopt is the wildcard.
struct LocalTransition {
  LocalId from = 0;
  std::vector<std::optional<ActionId>> pattern;
  LocalId to = 0;
};

struct LocalComponent {
  std::string name;
  std::vector<std::string> states;
  LocalId init = 0;
  std::vector<std::string> actions;
  std::vector<std::vector<ActionId>> protocol;  // indexed by local state
  std::vector<LocalTransition> transitions;

  std::optional<LocalId> find_state(std::string_view s) const;
  std::optional<ActionId> find_action(std::string_view a) const;
};

struct ConfigAlias {
  std::string name;
  std::vector<LocalId> locals;
};

// Plain-data form of a system, as read from an ISRL file. Labelling
// expressions use configuration ids (see config_index) as symbols.
struct SystemDescription {
  std::vector<LocalComponent> agents;
  std::vector<ConfigAlias> aliases;
  std::vector<std::string> variables;
  std::vector<RegexExpr> labelling;
};

// Mixed-radix id of a tuple of local states; agent 0 is most significant.
ConfigId config_index(const std::vector<LocalComponent>& agents, std::span<const LocalId> locals);
std::size_t config_count(const std::vector<LocalComponent>& agents);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const noexcept { return errors.empty(); }
};

ValidationReport validate_system(const SystemDescription& desc);

class InterpretedSystem {
 public:
  // Throws ModelError listing every violation if the description is invalid.
  explicit InterpretedSystem(SystemDescription desc);

  const SystemDescription& description() const noexcept { return desc_; }
  const ValidationReport& report() const noexcept { return report_; }

  std::size_t num_agents() const noexcept { return desc_.agents.size(); }
  const LocalComponent& agent(std::size_t i) const { return desc_.agents.at(i); }
  std::optional<std::size_t> find_agent(std::string_view name) const;

  std::size_t num_configs() const noexcept { return locals_.size(); }
  ConfigId initial_config() const noexcept { return initial_; }
  LocalId local(ConfigId g, std::size_t agent) const { return locals_[g][agent]; }
  const std::vector<LocalId>& locals(ConfigId g) const { return locals_.at(g); }
  ConfigId config_of(std::span<const LocalId> locals) const { return config_index(desc_.agents, locals); }
  const std::string& config_name(ConfigId g) const { return alphabet_->name(g); }
  std::string config_tuple(ConfigId g) const;
  // Accepts aliases and tuple syntax "(l0,l1,...)".
  std::optional<ConfigId> find_config(std::string_view text) const;
  const std::shared_ptr<const Alphabet>& config_alphabet() const noexcept { return alphabet_; }

  // Global transition relation t^G.
  const std::vector<ConfigId>& successors(ConfigId g) const { return succ_.at(g); }
  bool step(ConfigId from, ConfigId to) const;
  bool reachable(ConfigId g) const { return reachable_mask_.at(g); }
  const std::vector<ConfigId>& reachable_configs() const noexcept { return reachable_; }
  // Configurations whose local state for `agent` is `l`, ascending.
  const std::vector<ConfigId>& configs_with_local(std::size_t agent, LocalId l) const {
    return by_local_[agent].at(l);
  }

  std::size_t num_variables() const noexcept { return desc_.variables.size(); }
  const std::string& variable(std::size_t v) const { return desc_.variables.at(v); }
  std::optional<std::size_t> find_variable(std::string_view name) const;
  const RegexExpr& label(std::size_t v) const { return desc_.labelling.at(v); }
  const Dfa& dfa(std::size_t v) const { return dfas_.at(v); }

 private:
  SystemDescription desc_;
  ValidationReport report_;
  std::vector<std::vector<LocalId>> locals_;
  std::shared_ptr<const Alphabet> alphabet_;
  std::unordered_map<std::string, ConfigId> alias_index_;
  ConfigId initial_ = 0;
  std::vector<std::vector<ConfigId>> succ_;
  std::vector<bool> reachable_mask_;
  std::vector<ConfigId> reachable_;
  std::vector<std::vector<std::vector<ConfigId>>> by_local_;
  std::vector<Dfa> dfas_;
};

// t^G(g, g')
bool global_step(const InterpretedSystem& sys, ConfigId g, ConfigId g2);

// Breadth-first closure of {g_0} under t^G, ascending.
std::vector<ConfigId> reachable_configs(const InterpretedSystem& sys);

// Throws IntervalError unless `I` is non-empty, a t^G path, and starts at a
// reachable configuration.
void validate_interval(const InterpretedSystem& sys, const Interval& I);
bool is_valid_interval(const InterpretedSystem& sys, const Interval& I);

// Throws IntervalError unless history ++ interval is a t^G path from g_0.
void validate_anchored(const InterpretedSystem& sys, const AnchoredInterval& a);

// A shortest history reaching `g` (empty for g_0). Requires g reachable.
std::vector<ConfigId> shortest_history(const InterpretedSystem& sys, ConfigId g);

bool is_point(const Interval& I);

// g(I) ∈ L(λ(var)), via the variable's minimal DFA.
bool label_holds(const InterpretedSystem& sys, std::string_view var, const Interval& I);
bool label_holds(const InterpretedSystem& sys, std::size_t var, const Interval& I);

}  // namespace ehs
