#include "ehs/system.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ehs {

std::optional<LocalId> LocalComponent::find_state(std::string_view s) const {
  auto it = std::find(states.begin(), states.end(), s);
  if (it == states.end()) return std::nullopt;
  return static_cast<LocalId>(it - states.begin());
}

std::optional<ActionId> LocalComponent::find_action(std::string_view a) const {
  auto it = std::find(actions.begin(), actions.end(), a);
  if (it == actions.end()) return std::nullopt;
  return static_cast<ActionId>(it - actions.begin());
}

std::size_t config_count(const std::vector<LocalComponent>& agents) {
  std::size_t n = 1;
  for (const auto& a : agents) n *= a.states.size();
  return n;
}

ConfigId config_index(const std::vector<LocalComponent>& agents, std::span<const LocalId> locals) {
  ConfigId id = 0;
  for (std::size_t i = 0; i < agents.size(); ++i) id = id * static_cast<ConfigId>(agents[i].states.size()) + locals[i];
  return id;
}

namespace {

constexpr std::size_t kMaxConfigs = std::size_t{1} << 22;

template <class T>
bool has_duplicates(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) != v.end();
}

}  // namespace

ValidationReport validate_system(const SystemDescription& d) {
  ValidationReport r;
  auto err = [&](std::string m) { r.errors.push_back(std::move(m)); };
  if (d.agents.empty()) err("system must declare at least one agent");
  std::size_t configs = 1;
  for (std::size_t i = 0; i < d.agents.size(); ++i) {
    const auto& a = d.agents[i];
    const std::string who = "agent " + std::to_string(i) + " (" + a.name + ")";
    if (a.states.empty()) {
      err(who + " has no local states");
      continue;
    }
    configs *= a.states.size();
    if (has_duplicates(a.states)) err(who + " declares a local state twice");
    if (has_duplicates(a.actions)) err(who + " declares an action twice");
    if (a.init >= a.states.size()) err(who + " has an initial state outside its state set");
    if (a.protocol.size() != a.states.size()) err(who + " protocol is not total over its states");
    for (std::size_t l = 0; l < a.protocol.size(); ++l) {
      for (ActionId act : a.protocol[l])
        if (act >= a.actions.size()) err(who + " protocol uses an undeclared action");
      if (a.protocol[l].empty() && l < a.states.size())
        r.warnings.push_back(who + " local state '" + a.states[l] +
                             "' has no enabled action; no joint step leaves configurations containing it");
    }
    for (const auto& t : a.transitions) {
      if (t.from >= a.states.size() || t.to >= a.states.size()) err(who + " transition endpoint outside its state set");
      if (t.pattern.size() != d.agents.size()) {
        err(who + " transition pattern has " + std::to_string(t.pattern.size()) + " slots, expected " +
            std::to_string(d.agents.size()));
        continue;
      }
      for (std::size_t j = 0; j < t.pattern.size(); ++j)
        if (t.pattern[j] && *t.pattern[j] >= d.agents[j].actions.size())
          err(who + " transition names an action agent " + std::to_string(j) + " does not have");
    }
  }
  if (configs > kMaxConfigs) err("global configuration space too large (" + std::to_string(configs) + ")");
  std::set<std::string> alias_names;
  for (const auto& al : d.aliases) {
    if (!alias_names.insert(al.name).second) err("configuration alias '" + al.name + "' declared twice");
    if (al.locals.size() != d.agents.size()) {
      err("configuration alias '" + al.name + "' has the wrong arity");
      continue;
    }
    for (std::size_t i = 0; i < al.locals.size(); ++i)
      if (al.locals[i] >= d.agents[i].states.size()) err("configuration alias '" + al.name + "' names a bad state");
  }
  if (has_duplicates(d.variables)) err("a variable is labelled twice");
  if (d.labelling.size() != d.variables.size()) err("labelling must assign one expression to every variable");
  if (r.ok()) {
    for (std::size_t v = 0; v < d.variables.size(); ++v) {
      bool bad = false;
      d.labelling[v].for_each_leaf([&](Symbol s) { bad = bad || s >= configs; });
      if (bad) {
        err("labelling of '" + d.variables[v] + "' uses a symbol outside G");
        continue;
      }
      if (denotes(d.labelling[v], {}))
        r.warnings.push_back("unreachable labelling: intervals are non-empty, but the language of '" +
                             d.variables[v] + "' contains the empty word");
    }
  }
  return r;
}

InterpretedSystem::InterpretedSystem(SystemDescription desc) : desc_(std::move(desc)) {
  report_ = validate_system(desc_);
  if (!report_.ok()) {
    std::string msg = "invalid interpreted system:";
    for (const auto& e : report_.errors) msg += "\n  " + e;
    throw ModelError(msg);
  }
  const auto& agents = desc_.agents;
  const std::size_t m = agents.size();
  const std::size_t n = config_count(agents);

  locals_.resize(n);
  for (ConfigId g = 0; g < n; ++g) {
    std::vector<LocalId> l(m);
    ConfigId rest = g;
    for (std::size_t i = m; i-- > 0;) {
      l[i] = rest % static_cast<ConfigId>(agents[i].states.size());
      rest /= static_cast<ConfigId>(agents[i].states.size());
    }
    locals_[g] = std::move(l);
  }
  std::vector<std::string> names(n);
  for (ConfigId g = 0; g < n; ++g) names[g] = config_tuple(g);
  for (const auto& al : desc_.aliases) {
    ConfigId g = config_of(al.locals);
    if (alias_index_.emplace(al.name, g).second && names[g].front() == '(') names[g] = al.name;
  }
  alphabet_ = std::make_shared<const Alphabet>(names);
  {
    std::vector<LocalId> init(m);
    for (std::size_t i = 0; i < m; ++i) init[i] = agents[i].init;
    initial_ = config_of(init);
  }

  // t^G: for every joint action permitted by all protocols, every combination
  // of matching local transitions yields a successor.
  succ_.assign(n, {});
  for (ConfigId g = 0; g < n; ++g) {
    std::vector<const std::vector<ActionId>*> enabled(m);
    bool blocked = false;
    for (std::size_t i = 0; i < m; ++i) {
      enabled[i] = &agents[i].protocol[locals_[g][i]];
      blocked = blocked || enabled[i]->empty();
    }
    if (blocked) continue;
    std::set<ConfigId> out;
    std::vector<std::size_t> pick(m, 0);
    std::vector<ActionId> joint(m);
    for (;;) {
      for (std::size_t i = 0; i < m; ++i) joint[i] = (*enabled[i])[pick[i]];
      std::vector<std::vector<LocalId>> targets(m);
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        for (const auto& t : agents[i].transitions) {
          if (t.from != locals_[g][i]) continue;
          bool match = true;
          for (std::size_t j = 0; j < m && match; ++j) match = !t.pattern[j] || *t.pattern[j] == joint[j];
          if (match) targets[i].push_back(t.to);
        }
        ok = !targets[i].empty();
      }
      if (ok) {
        std::vector<std::size_t> sel(m, 0);
        std::vector<LocalId> next(m);
        for (;;) {
          for (std::size_t i = 0; i < m; ++i) next[i] = targets[i][sel[i]];
          out.insert(config_of(next));
          std::size_t i = m;
          while (i-- > 0) {
            if (++sel[i] < targets[i].size()) break;
            sel[i] = 0;
          }
          if (i == static_cast<std::size_t>(-1)) break;
        }
      }
      std::size_t i = m;
      while (i-- > 0) {
        if (++pick[i] < enabled[i]->size()) break;
        pick[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    succ_[g].assign(out.begin(), out.end());
  }

  reachable_mask_.assign(n, false);
  std::deque<ConfigId> queue{initial_};
  reachable_mask_[initial_] = true;
  while (!queue.empty()) {
    ConfigId g = queue.front();
    queue.pop_front();
    for (ConfigId h : succ_[g])
      if (!reachable_mask_[h]) {
        reachable_mask_[h] = true;
        queue.push_back(h);
      }
  }
  for (ConfigId g = 0; g < n; ++g)
    if (reachable_mask_[g]) reachable_.push_back(g);

  by_local_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    by_local_[i].assign(agents[i].states.size(), {});
    for (ConfigId g = 0; g < n; ++g) by_local_[i][locals_[g][i]].push_back(g);
  }

  dfas_.reserve(desc_.variables.size());
  for (const auto& e : desc_.labelling) dfas_.push_back(compile(e, alphabet_));
}

std::string InterpretedSystem::config_tuple(ConfigId g) const {
  std::string s = "(";
  for (std::size_t i = 0; i < num_agents(); ++i) {
    if (i) s += ",";
    s += desc_.agents[i].states[locals_[g][i]];
  }
  return s + ")";
}

std::optional<std::size_t> InterpretedSystem::find_agent(std::string_view name) const {
  for (std::size_t i = 0; i < desc_.agents.size(); ++i)
    if (desc_.agents[i].name == name) return i;
  return std::nullopt;
}

std::optional<ConfigId> InterpretedSystem::find_config(std::string_view text) const {
  if (auto it = alias_index_.find(std::string(text)); it != alias_index_.end()) return it->second;
  if (auto s = alphabet_->find(text)) return *s;
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') return std::nullopt;
  std::vector<LocalId> l;
  std::string_view body = text.substr(1, text.size() - 2);
  std::size_t agent = 0;
  while (true) {
    std::size_t comma = body.find(',');
    std::string_view part = body.substr(0, comma);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (agent >= num_agents()) return std::nullopt;
    auto st = desc_.agents[agent].find_state(part);
    if (!st) return std::nullopt;
    l.push_back(*st);
    ++agent;
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (l.size() != num_agents()) return std::nullopt;
  return config_of(l);
}

bool InterpretedSystem::step(ConfigId from, ConfigId to) const {
  const auto& s = succ_.at(from);
  return std::binary_search(s.begin(), s.end(), to);
}

std::optional<std::size_t> InterpretedSystem::find_variable(std::string_view name) const {
  for (std::size_t v = 0; v < desc_.variables.size(); ++v)
    if (desc_.variables[v] == name) return v;
  return std::nullopt;
}

bool global_step(const InterpretedSystem& sys, ConfigId g, ConfigId g2) { return sys.step(g, g2); }

std::vector<ConfigId> reachable_configs(const InterpretedSystem& sys) { return sys.reachable_configs(); }

bool is_valid_interval(const InterpretedSystem& sys, const Interval& I) {
  if (I.empty()) return false;
  for (ConfigId g : I)
    if (g >= sys.num_configs()) return false;
  if (!sys.reachable(I.first())) return false;
  for (std::size_t j = 0; j + 1 < I.size(); ++j)
    if (!sys.step(I[j], I[j + 1])) return false;
  return true;
}

void validate_interval(const InterpretedSystem& sys, const Interval& I) {
  if (I.empty()) throw IntervalError("interval must be non-empty");
  for (ConfigId g : I)
    if (g >= sys.num_configs()) throw IntervalError("interval names an unknown configuration");
  if (!sys.reachable(I.first()))
    throw IntervalError("interval starts at unreachable configuration " + sys.config_name(I.first()));
  for (std::size_t j = 0; j + 1 < I.size(); ++j)
    if (!sys.step(I[j], I[j + 1]))
      throw IntervalError("no global transition from " + sys.config_name(I[j]) + " to " + sys.config_name(I[j + 1]));
}

void validate_anchored(const InterpretedSystem& sys, const AnchoredInterval& a) {
  if (a.interval.empty()) throw IntervalError("interval must be non-empty");
  std::vector<ConfigId> full = a.history;
  full.insert(full.end(), a.interval.begin(), a.interval.end());
  for (ConfigId g : full)
    if (g >= sys.num_configs()) throw IntervalError("anchored interval names an unknown configuration");
  if (full.front() != sys.initial_config()) throw IntervalError("anchored interval must start at the initial configuration");
  for (std::size_t j = 0; j + 1 < full.size(); ++j)
    if (!sys.step(full[j], full[j + 1])) throw IntervalError("anchored interval is not a path of t^G");
}

std::vector<ConfigId> shortest_history(const InterpretedSystem& sys, ConfigId g) {
  if (!sys.reachable(g)) throw IntervalError("configuration " + sys.config_name(g) + " is unreachable");
  if (g == sys.initial_config()) return {};
  std::vector<ConfigId> parent(sys.num_configs(), static_cast<ConfigId>(-1));
  std::vector<bool> seen(sys.num_configs(), false);
  std::deque<ConfigId> queue{sys.initial_config()};
  seen[sys.initial_config()] = true;
  while (!queue.empty()) {
    ConfigId c = queue.front();
    queue.pop_front();
    if (c == g) break;
    for (ConfigId h : sys.successors(c))
      if (!seen[h]) {
        seen[h] = true;
        parent[h] = c;
        queue.push_back(h);
      }
  }
  std::vector<ConfigId> hist;
  for (ConfigId c = parent[g];; c = parent[c]) {
    hist.push_back(c);
    if (c == sys.initial_config()) break;
  }
  std::reverse(hist.begin(), hist.end());
  return hist;
}

bool is_point(const Interval& I) { return I.is_point(); }

bool label_holds(const InterpretedSystem& sys, std::size_t var, const Interval& I) {
  const Dfa& d = sys.dfa(var);
  return d.accepting(d.run(I.word()));
}

bool label_holds(const InterpretedSystem& sys, std::string_view var, const Interval& I) {
  auto v = sys.find_variable(var);
  if (!v) throw ModelError("unknown variable '" + std::string(var) + "'");
  return label_holds(sys, *v, I);
}

}  // namespace ehs
