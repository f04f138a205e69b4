#include "ehs/isrl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace ehs {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;  // comment stripped
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] void fail(const Line& ln, std::string_view at, const std::string& msg) {
  std::size_t col = at.data() >= ln.text.data() ? static_cast<std::size_t>(at.data() - ln.text.data()) : 0;
  throw ParseError("line " + std::to_string(ln.number) + ": " + msg, col);
}

// "(a, b, *)" -> {"a","b","*"}
std::vector<std::string> split_tuple(const Line& ln, std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') fail(ln, s, "expected a parenthesised tuple");
  std::vector<std::string> out;
  s = s.substr(1, s.size() - 2);
  for (;;) {
    auto comma = s.find(',');
    auto part = trim(s.substr(0, comma));
    if (part.empty()) fail(ln, s, "empty tuple slot");
    out.emplace_back(part);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

struct PendingTrans {
  Line line;
  std::size_t agent;
  LocalId from;
  std::vector<std::string> slots;
  LocalId to;
};

}  // namespace

SystemDescription parse_isrl(std::string_view text) {
  std::vector<Line> lines;
  {
    std::size_t no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      auto raw = text.substr(start, end - start);
      if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      lines.push_back({no++, raw});
      start = end + 1;
    }
  }

  SystemDescription d;
  std::vector<PendingTrans> trans;
  std::vector<std::pair<Line, std::string_view>> configs, labels;
  LocalComponent* cur = nullptr;
  bool have_states = false;

  for (const auto& ln : lines) {
    auto body = trim(ln.text);
    if (body.empty()) continue;
    auto sp = body.find_first_of(" \t");
    auto kw = body.substr(0, sp);
    auto rest = sp == std::string_view::npos ? std::string_view{} : trim(body.substr(sp));

    if (kw == "agent") {
      auto w = words(rest);
      if (w.size() != 1) fail(ln, rest, "expected 'agent NAME'");
      d.agents.push_back({});
      cur = &d.agents.back();
      cur->name = w[0];
      have_states = false;
      continue;
    }
    if (kw == "config") {
      configs.emplace_back(ln, rest);
      cur = nullptr;
      continue;
    }
    if (kw == "label") {
      labels.emplace_back(ln, rest);
      cur = nullptr;
      continue;
    }
    if (!cur) fail(ln, kw, "'" + std::string(kw) + "' outside an agent block");

    auto need_state = [&](std::string_view name) {
      auto s = cur->find_state(name);
      if (!s) fail(ln, rest, "unknown local state '" + std::string(name) + "' of agent " + cur->name);
      return *s;
    };
    if (kw == "states") {
      if (have_states) fail(ln, kw, "states declared twice");
      cur->states = words(rest);
      if (cur->states.empty()) fail(ln, rest, "an agent needs at least one local state");
      cur->protocol.assign(cur->states.size(), {});
      have_states = true;
      continue;
    }
    if (kw == "actions") {
      for (auto& a : words(rest)) cur->actions.push_back(a);
      continue;
    }
    if (!have_states) fail(ln, kw, "'" + std::string(kw) + "' before 'states'");
    if (kw == "init") {
      auto w = words(rest);
      if (w.size() != 1) fail(ln, rest, "expected 'init STATE'");
      cur->init = need_state(w[0]);
    } else if (kw == "protocol") {
      auto colon = rest.find(':');
      if (colon == std::string_view::npos) fail(ln, rest, "expected 'protocol STATE: actions...'");
      LocalId l = need_state(trim(rest.substr(0, colon)));
      for (auto& a : words(rest.substr(colon + 1))) {
        auto act = cur->find_action(a);
        if (!act) fail(ln, rest, "unknown action '" + a + "' of agent " + cur->name);
        cur->protocol[l].push_back(*act);
      }
    } else if (kw == "trans") {
      auto open = rest.find('(');
      auto close = rest.rfind(')');
      if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        fail(ln, rest, "expected 'trans STATE (a0,...,am) STATE'");
      LocalId from = need_state(trim(rest.substr(0, open)));
      auto slots = split_tuple(ln, rest.substr(open, close - open + 1));
      auto to_txt = trim(rest.substr(close + 1));
      LocalId to = need_state(to_txt);
      trans.push_back({ln, static_cast<std::size_t>(cur - d.agents.data()), from, std::move(slots), to});
    } else {
      fail(ln, kw, "unknown keyword '" + std::string(kw) + "'");
    }
  }
  if (d.agents.empty()) throw ParseError("system declares no agents", 0);
  for (auto& a : d.agents)
    if (a.states.empty()) throw ParseError("agent " + a.name + " declares no states", 0);

  for (auto& t : trans) {
    if (t.slots.size() != d.agents.size())
      fail(t.line, t.line.text,
           "joint action has " + std::to_string(t.slots.size()) + " slots, expected " + std::to_string(d.agents.size()));
    LocalTransition lt{t.from, {}, t.to};
    for (std::size_t j = 0; j < t.slots.size(); ++j) {
      if (t.slots[j] == "*") {
        lt.pattern.push_back(std::nullopt);
        continue;
      }
      auto act = d.agents[j].find_action(t.slots[j]);
      if (!act) fail(t.line, t.line.text, "agent " + d.agents[j].name + " has no action '" + t.slots[j] + "'");
      lt.pattern.push_back(*act);
    }
    d.agents[t.agent].transitions.push_back(std::move(lt));
  }

  auto tuple_locals = [&](const Line& ln, std::string_view s) -> std::optional<std::vector<LocalId>> {
    auto slots = split_tuple(ln, s);
    if (slots.size() != d.agents.size()) return std::nullopt;
    std::vector<LocalId> l;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      auto st = d.agents[i].find_state(slots[i]);
      if (!st) return std::nullopt;
      l.push_back(*st);
    }
    return l;
  };

  std::unordered_map<std::string, ConfigId> alias;
  for (auto& [ln, rest] : configs) {
    auto eq = rest.find('=');
    if (eq == std::string_view::npos) fail(ln, rest, "expected 'config ALIAS = (l0,...,lm)'");
    std::string name(trim(rest.substr(0, eq)));
    if (words(name).size() != 1) fail(ln, rest, "bad configuration alias");
    auto l = tuple_locals(ln, rest.substr(eq + 1));
    if (!l) fail(ln, rest, "configuration tuple does not match the agents' states");
    if (!alias.emplace(name, config_index(d.agents, *l)).second) fail(ln, rest, "alias '" + name + "' declared twice");
    d.aliases.push_back({name, *l});
  }

  for (auto& [ln, rest] : labels) {
    auto eq = rest.find('=');
    if (eq == std::string_view::npos) fail(ln, rest, "expected 'label VAR = REGEX'");
    std::string var(trim(rest.substr(0, eq)));
    if (words(var).size() != 1) fail(ln, rest, "bad variable name");
    auto rx = rest.substr(eq + 1);
    std::size_t base = static_cast<std::size_t>(rx.data() - ln.text.data());
    auto lookup = [&](std::string_view tok) -> std::optional<Symbol> {
      if (auto it = alias.find(std::string(tok)); it != alias.end()) return it->second;
      if (tok.front() != '(') return std::nullopt;
      auto l = tuple_locals(ln, tok);
      if (!l) return std::nullopt;
      return config_index(d.agents, *l);
    };
    try {
      d.labelling.push_back(parse_regex(rx, lookup, base));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(ln.number) + ": " + e.what(), e.position());
    }
    d.variables.push_back(var);
  }
  return d;
}

InterpretedSystem load_isrl(std::string_view text) { return InterpretedSystem(parse_isrl(text)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InterpretedSystem load_isrl_file(const std::string& path) { return load_isrl(read_text_file(path)); }

std::string write_isrl(const SystemDescription& d) {
  std::ostringstream out;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  for (const auto& a : d.agents) {
    out << "agent " << a.name << "\n";
    out << "  states " << join(a.states) << "\n";
    out << "  init " << a.states[a.init] << "\n";
    out << "  actions" << (a.actions.empty() ? "" : " ") << join(a.actions) << "\n";
    for (std::size_t l = 0; l < a.states.size(); ++l) {
      out << "  protocol " << a.states[l] << ":";
      for (ActionId act : a.protocol[l]) out << " " << a.actions[act];
      out << "\n";
    }
    for (const auto& t : a.transitions) {
      out << "  trans " << a.states[t.from] << " (";
      for (std::size_t j = 0; j < t.pattern.size(); ++j) {
        if (j) out << ",";
        out << (t.pattern[j] ? d.agents[j].actions[*t.pattern[j]] : "*");
      }
      out << ") " << a.states[t.to] << "\n";
    }
  }
  std::unordered_map<ConfigId, std::string> name;
  for (const auto& al : d.aliases) {
    out << "config " << al.name << " = (";
    for (std::size_t i = 0; i < al.locals.size(); ++i) out << (i ? "," : "") << d.agents[i].states[al.locals[i]];
    out << ")\n";
    name.emplace(config_index(d.agents, al.locals), al.name);
  }
  auto print_leaf = [&](Symbol g) {
    if (auto it = name.find(g); it != name.end()) return it->second;
    std::vector<std::string> parts(d.agents.size());
    ConfigId rest = g;
    for (std::size_t i = d.agents.size(); i-- > 0;) {
      auto n = static_cast<ConfigId>(d.agents[i].states.size());
      parts[i] = d.agents[i].states[rest % n];
      rest /= n;
    }
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
    return s + ")";
  };
  for (std::size_t v = 0; v < d.variables.size(); ++v)
    out << "label " << d.variables[v] << " = " << to_string(d.labelling[v], print_leaf) << "\n";
  return out.str();
}

std::string tg_to_dot(const InterpretedSystem& sys) {
  std::ostringstream out;
  auto quote = [](const std::string& s) { return "\"" + s + "\""; };
  out << "digraph tg {\n  rankdir=LR;\n";
  for (ConfigId g : sys.reachable_configs()) {
    out << "  " << quote(sys.config_name(g));
    if (g == sys.initial_config()) out << " [shape=doublecircle]";
    out << ";\n";
  }
  for (ConfigId g : sys.reachable_configs())
    for (ConfigId h : sys.successors(g)) out << "  " << quote(sys.config_name(g)) << " -> " << quote(sys.config_name(h)) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace ehs
