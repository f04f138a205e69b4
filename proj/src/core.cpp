#include "ehs/core.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "ehs/error.hpp"

namespace ehs {

std::size_t resolve_agent(const InterpretedSystem& sys, const std::string& agent) {
  if (!agent.empty() && std::all_of(agent.begin(), agent.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    std::size_t i = std::stoul(agent);
    if (i >= sys.num_agents()) throw ModelError("agent index " + agent + " out of range");
    return i;
  }
  if (auto i = sys.find_agent(agent)) return *i;
  throw ModelError("unknown agent '" + agent + "'");
}

int CoreFormula::add(Node n, const std::string& key) {
  auto it = std::find(keys_.begin(), keys_.end(), key);
  if (it != keys_.end()) return static_cast<int>(it - keys_.begin());
  nodes_.push_back(std::move(n));
  keys_.push_back(key);
  return static_cast<int>(nodes_.size()) - 1;
}

int CoreFormula::build(const Formula& f, const InterpretedSystem& sys) {
  using K = Formula::Kind;
  Node n;
  n.source = f;
  std::string key = ehs::to_string(f);
  auto kid = [&](std::size_t i) {
    int id = build(f.child(i), sys);
    n.history = n.history || nodes_[static_cast<std::size_t>(id)].history;
    n.depth = std::max(n.depth, nodes_[static_cast<std::size_t>(id)].depth);
    return id;
  };
  switch (f.kind()) {
    case K::True: n.op = Op::True; break;
    case K::Pi: n.op = Op::Pi; break;
    case K::Var: {
      auto v = sys.find_variable(f.name());
      if (!v) throw ModelError("unknown variable '" + f.name() + "'");
      n.op = Op::Var;
      n.var = *v;
      break;
    }
    case K::Atom: {
      n.op = Op::Atom;
      auto r = f.regex().map_leaves([&](const Letter& l) {
        BoundLetter b{l.kind, {}};
        for (const auto& v : l.vars) {
          auto i = sys.find_variable(v);
          if (!i) throw ModelError("unknown variable '" + v + "' in regex atom");
          b.vars.push_back(*i);
        }
        std::sort(b.vars.begin(), b.vars.end());
        return b;
      });
      auto it = std::find(atoms_.begin(), atoms_.end(), r);
      n.atom = static_cast<int>(it - atoms_.begin());
      if (it == atoms_.end()) atoms_.push_back(std::move(r));
      break;
    }
    case K::Not:
      n.op = Op::Not;
      n.a = kid(0);
      break;
    case K::And:
      n.op = Op::And;
      n.a = kid(0);
      n.b = kid(1);
      break;
    case K::Know:
    case K::Common:
      n.op = f.kind() == K::Know ? Op::Know : Op::Common;
      for (const auto& a : f.agents()) n.agents.push_back(resolve_agent(sys, a));
      std::sort(n.agents.begin(), n.agents.end());
      n.agents.erase(std::unique(n.agents.begin(), n.agents.end()), n.agents.end());
      n.a = kid(0);
      ++n.depth;
      break;
    case K::Diamond:
      n.op = Op::Diamond;
      n.mod = f.modality();
      n.a = kid(0);
      n.history = n.history || needs_history(n.mod);
      ++n.depth;
      break;
    default: throw Error("formula not normalised");
  }
  return add(std::move(n), key);
}

CoreFormula CoreFormula::bind(const Formula& f, const InterpretedSystem& sys) {
  CoreFormula c;
  c.root_ = c.build(normalize(f), sys);
  return c;
}

std::vector<int> CoreFormula::top_level(int id) const {
  std::vector<int> out;
  auto walk = [&](auto&& self, int i) -> void {
    const Node& n = node(i);
    switch (n.op) {
      case Op::Not: self(self, n.a); break;
      case Op::And:
        self(self, n.a);
        self(self, n.b);
        break;
      case Op::Know:
      case Op::Common:
      case Op::Diamond:
        if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
        break;
      default: break;
    }
  };
  walk(walk, id);
  return out;
}

BigBound::Int fis_base(const InterpretedSystem& sys, bool tight) {
  BigBound::Int g = sys.num_configs();
  BigBound::Int base = 2 * g * g;
  for (std::size_t v = 0; v < sys.num_variables(); ++v) {
    auto q = sys.dfa(v).num_states();
    if (tight)
      base *= q;
    else
      base <<= q;
  }
  return base;
}

namespace {

BigBound fis_rec(const CoreFormula& c, int id, const BigBound::Int& base, bool tight,
                 std::unordered_map<int, BigBound>& memo) {
  if (auto it = memo.find(id); it != memo.end()) return it->second;
  BigBound sum(BigBound::Int(0));
  for (int t : c.top_level(id)) sum = sum + fis_rec(c, c.node(t).a, base, tight, memo);
  BigBound out = BigBound::shifted(base, sum);
  if (tight) out = out + BigBound(BigBound::Int(1));
  memo.emplace(id, out);
  return out;
}

}  // namespace

BigBound fis_bound(const InterpretedSystem& sys, const CoreFormula& c, int id, bool tight) {
  std::unordered_map<int, BigBound> memo;
  return fis_rec(c, id, fis_base(sys, tight), tight, memo);
}

BigBound fis_bound(const InterpretedSystem& sys, const Formula& f, bool tight) {
  Formula g = eliminate_L(f);
  if (!in_abln(g)) throw FragmentError("f^IS is defined for the ABLN fragment only");
  auto c = CoreFormula::bind(g, sys);
  std::unordered_map<int, BigBound> memo;
  return fis_rec(c, c.root(), fis_base(sys, tight), tight, memo);
}

}  // namespace ehs
