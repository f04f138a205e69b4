#include "ehs/mc_abln.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <tuple>

#include "ehs/error.hpp"
#include "ehs/relations.hpp"

namespace ehs {

BoundMode BoundMode::user(std::uint64_t k) {
  if (k == 0) throw Error("a user bound must be at least 1");
  return {Kind::User, k};
}

std::string to_string(const BoundMode& m) {
  switch (m.kind) {
    case BoundMode::Kind::Paper: return "paper";
    case BoundMode::Kind::User: return "user(" + std::to_string(m.k) + ")";
    case BoundMode::Kind::Tight: return "tight";
  }
  return "?";
}

std::string Verdict::regime() const {
  return conclusive ? "Conclusive" : "BoundedAt(" + std::to_string(bounded_at) + ")";
}

StartConstraint StartConstraint::starts_at(std::vector<ConfigId> gs) {
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  return {Kind::StartsAt, std::move(gs), {}};
}

StartConstraint StartConstraint::extends(Interval I) { return {Kind::Extends, {}, std::move(I)}; }

namespace {

// <L> is kept only where its operand is modal-free (the product search
// decides it exactly); elsewhere it is rewritten into <A>(!pi & <A> ...).
Formula expand_hard_L(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not: return Formula::negate(expand_hard_L(f.child()));
    case K::And: return Formula::conj(expand_hard_L(f.child(0)), expand_hard_L(f.child(1)));
    case K::Know: return Formula::know(f.agents()[0], expand_hard_L(f.child()));
    case K::Common: return Formula::common(f.agents(), expand_hard_L(f.child()));
    case K::Diamond: {
      Formula op = expand_hard_L(f.child());
      if (f.modality() != Modality::L || op.modal_free()) return Formula::diamond(f.modality(), op);
      return Formula::diamond(Modality::A,
                              Formula::conj(Formula::negate(Formula::pi()), Formula::diamond(Modality::A, op)));
    }
    default: return f;
  }
}

Formula prepare(const Formula& f) {
  if (uses_regex_atoms(f)) throw FragmentError("regex atoms must be translated to variables first");
  Formula g = normalize(f);
  if (!in_abln(g)) throw FragmentError("formula is outside the ABLN fragment: " + to_string(f));
  return expand_hard_L(g);
}

std::vector<std::uint32_t> dfa_states(const InterpretedSystem& sys, const Interval& I) {
  std::vector<std::uint32_t> q(sys.num_variables());
  for (std::size_t v = 0; v < q.size(); ++v) q[v] = sys.dfa(v).run(I.word());
  return q;
}

// Modal-free operands only: decided by the DFA states and pointhood.
bool eval_local(const CoreFormula& c, int id, const std::vector<std::uint32_t>& q, bool point,
                const InterpretedSystem& sys) {
  const auto& n = c.node(id);
  using Op = CoreFormula::Op;
  switch (n.op) {
    case Op::True: return true;
    case Op::Pi: return point;
    case Op::Var: return sys.dfa(n.var).accepting(q[n.var]);
    case Op::Not: return !eval_local(c, n.a, q, point, sys);
    case Op::And: return eval_local(c, n.a, q, point, sys) && eval_local(c, n.b, q, point, sys);
    case Op::Atom: throw FragmentError("regex atoms must be translated to variables first");
    default: throw FragmentError("the witness search needs a modal-free operand: " + c.to_string(id));
  }
}

// Breadth-first search of (configuration, DFA states, point flag). Returns
// the shortest witness path (appended to the prefix for Extends).
std::optional<Interval> product_search(const InterpretedSystem& sys, const StartConstraint& where,
                                       const CoreFormula& c, int id) {
  struct Node {
    ConfigId g;
    std::vector<std::uint32_t> q;
    bool point;
    int parent;
  };
  std::vector<Node> nodes;
  std::map<std::tuple<ConfigId, bool, std::vector<std::uint32_t>>, int> seen;
  std::deque<int> queue;
  auto push = [&](ConfigId g, std::vector<std::uint32_t> q, bool point, int parent) {
    auto key = std::make_tuple(g, point, q);
    if (seen.contains(key)) return;
    seen.emplace(std::move(key), static_cast<int>(nodes.size()));
    queue.push_back(static_cast<int>(nodes.size()));
    nodes.push_back({g, std::move(q), point, parent});
  };
  const std::size_t nv = sys.num_variables();
  if (where.kind == StartConstraint::Kind::StartsAt) {
    for (ConfigId g : where.starts) {
      std::vector<std::uint32_t> q(nv);
      for (std::size_t v = 0; v < nv; ++v) q[v] = sys.dfa(v).step(sys.dfa(v).initial(), g);
      push(g, std::move(q), true, -1);
    }
  } else {
    auto base = dfa_states(sys, where.prefix);
    for (ConfigId g : sys.successors(where.prefix.last())) {
      auto q = base;
      for (std::size_t v = 0; v < nv; ++v) q[v] = sys.dfa(v).step(q[v], g);
      push(g, std::move(q), false, -1);
    }
  }
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    if (eval_local(c, id, nodes[i].q, nodes[i].point, sys)) {
      std::vector<ConfigId> path;
      for (int j = i; j >= 0; j = nodes[j].parent) path.push_back(nodes[j].g);
      std::reverse(path.begin(), path.end());
      if (where.kind == StartConstraint::Kind::Extends) {
        auto full = where.prefix.configs();
        full.insert(full.end(), path.begin(), path.end());
        return Interval(std::move(full));
      }
      return Interval(std::move(path));
    }
    for (ConfigId h : sys.successors(nodes[i].g)) {
      auto q = nodes[i].q;
      for (std::size_t v = 0; v < nv; ++v) q[v] = sys.dfa(v).step(q[v], h);
      push(h, std::move(q), false, i);
    }
  }
  return std::nullopt;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

// Number of paths of length 1..max_len from `starts`, capped just above `cap`.
std::uint64_t count_paths(const InterpretedSystem& sys, const std::vector<ConfigId>& starts, std::uint64_t max_len,
                          std::uint64_t cap) {
  std::vector<std::uint64_t> layer(sys.num_configs(), 0);
  for (ConfigId g : starts) layer[g] = 1;
  std::uint64_t total = 0;
  for (std::uint64_t len = 1; len <= max_len; ++len) {
    std::uint64_t sum = 0;
    for (auto x : layer) sum = saturating_add(sum, x);
    if (sum == 0) break;
    total = saturating_add(total, sum);
    if (total > cap) return total;
    std::vector<std::uint64_t> next(layer.size(), 0);
    for (ConfigId g = 0; g < layer.size(); ++g)
      if (layer[g])
        for (ConfigId h : sys.successors(g)) next[h] = std::min(saturating_add(next[h], layer[g]), cap + 1);
    layer = std::move(next);
  }
  return total;
}

class Abln {
 public:
  Abln(const InterpretedSystem& sys, const CoreFormula& f, const AblnOptions& o, AblnStats& st)
      : sys_(sys), f_(f), opts_(o), stats_(st) {}

  struct Val {
    bool holds = false;
    bool exact = true;
    std::uint64_t k = 0;
  };

  Val eval(int id, const Interval& I) {
    auto key = std::make_pair(id, I);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ++stats_.evaluations;
    Val v = eval_raw(id, I);
    memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  static void absorb(Val& acc, const Val& v) {
    if (v.exact) return;
    acc.k = acc.exact ? v.k : std::min(acc.k, v.k);
    acc.exact = false;
  }

  Val eval_raw(int id, const Interval& I) {
    const auto& n = f_.node(id);
    using Op = CoreFormula::Op;
    switch (n.op) {
      case Op::True: return {true};
      case Op::Pi: return {I.is_point()};
      case Op::Var: return {label_holds(sys_, n.var, I)};
      case Op::Atom: throw FragmentError("regex atoms must be translated to variables first");
      case Op::Not: {
        Val v = eval(n.a, I);
        v.holds = !v.holds;
        return v;
      }
      case Op::And: {
        Val a = eval(n.a, I);
        if (!a.holds) return a;
        Val b = eval(n.b, I);
        absorb(b, a);
        return b;
      }
      case Op::Know:
      case Op::Common: {
        auto cls = n.op == Op::Know ? epi_class(sys_, I, n.agents[0]) : common_class(sys_, I, n.agents);
        Val acc{true};
        for (const auto& J : cls) {
          Val v = eval(n.a, J);
          if (!v.holds) return v;
          absorb(acc, v);
        }
        return acc;
      }
      case Op::Diamond: return diamond(n, I);
    }
    return {};
  }

  Val diamond(const CoreFormula::Node& n, const Interval& I) {
    if (f_.modal_free(n.a)) {
      ++stats_.witness_searches;
      StartConstraint where;
      switch (n.mod) {
        case Modality::A: where = StartConstraint::starts_at({I.last()}); break;
        case Modality::N: where = StartConstraint::starts_at(sys_.successors(I.last())); break;
        case Modality::L: where = StartConstraint::starts_at(strictly_reachable_from(sys_, I.last())); break;
        case Modality::Bbar: where = StartConstraint::extends(I); break;
        default: throw FragmentError("modality <" + std::string(to_string(n.mod)) + "> is outside the ABLN fragment");
      }
      auto w = product_search(sys_, where, f_, n.a);
      if (w) note_witness(n.mod, I, *w);
      return {w.has_value()};
    }

    Relation rel;
    switch (n.mod) {
      case Modality::A: rel = Relation::A; break;
      case Modality::N: rel = Relation::N; break;
      case Modality::Bbar: rel = Relation::Bbar; break;
      default: throw FragmentError("modality <" + std::string(to_string(n.mod)) + "> is outside the ABLN fragment");
    }
    auto [bound, exact] = bound_for(n.a);
    std::uint64_t max_len = saturating_add(I.size(), bound);
    std::uint64_t extra = rel == Relation::Bbar ? bound : max_len;
    std::vector<ConfigId> starts = rel == Relation::A ? std::vector<ConfigId>{I.last()} : sys_.successors(I.last());
    std::uint64_t frontier = count_paths(sys_, starts, extra, opts_.frontier_ceiling);
    stats_.largest_frontier = std::max(stats_.largest_frontier, frontier);
    if (frontier > opts_.frontier_ceiling)
      throw BoundInfeasible("bounded search for <" + std::string(to_string(n.mod)) + ">(" + f_.to_string(n.a) + ")" +
                            " with bound " + std::to_string(bound) + " would enumerate more than " +
                            std::to_string(opts_.frontier_ceiling) + " intervals");

    Val acc{false, exact, exact ? 0 : bound};
    Val found{false};
    for_each_allen_successor(sys_, I, rel, static_cast<std::size_t>(max_len), [&](const Interval& J) {
      ++stats_.enumerated;
      Val v = eval(n.a, J);
      if (v.holds) {
        note_witness(n.mod, I, J);
        found = v;
        return false;
      }
      absorb(acc, v);
      return true;
    });
    return found.holds ? found : acc;
  }

  // The bound on successor length beyond |I| and whether it is at least the
  // f^IS bound of the operand.
  std::pair<std::uint64_t, bool> bound_for(int operand) {
    auto it = bounds_.find(operand);
    if (it != bounds_.end()) return it->second;
    std::pair<std::uint64_t, bool> out;
    const auto& m = opts_.mode;
    if (m.kind == BoundMode::Kind::User) {
      out = {m.k, !fis_bound(sys_, f_, operand, false).exceeds(m.k)};
    } else {
      bool tight = m.kind == BoundMode::Kind::Tight;
      BigBound b = fis_bound(sys_, f_, operand, tight);
      auto v = b.to_u64();
      if (!v)
        throw BoundInfeasible("bound f^IS(" + f_.to_string(operand) + ") = " + b.to_string() +
                              " is too large to enumerate");
      out = {*v, !tight};
    }
    bounds_.emplace(operand, out);
    return out;
  }

  void note_witness(Modality m, const Interval& I, const Interval& J) {
    std::size_t extent = m == Modality::Bbar ? J.size() - I.size() : J.size();
    stats_.max_witness_extent = std::max(stats_.max_witness_extent, extent);
  }

  const InterpretedSystem& sys_;
  const CoreFormula& f_;
  const AblnOptions& opts_;
  AblnStats& stats_;
  std::map<std::pair<int, Interval>, Val> memo_;
  std::map<int, std::pair<std::uint64_t, bool>> bounds_;
};

}  // namespace

Verdict check_abln(const InterpretedSystem& sys, const Interval& I, const Formula& f, const AblnOptions& opts) {
  Formula g = prepare(f);
  validate_interval(sys, I);
  auto core = CoreFormula::bind(g, sys);
  Verdict out;
  Abln engine(sys, core, opts, out.stats);
  auto v = engine.eval(core.root(), I);
  out.holds = v.holds;
  out.conclusive = v.exact;
  out.bounded_at = v.exact ? 0 : v.k;
  return out;
}

std::optional<Interval> regular_witness_search(const InterpretedSystem& sys, const StartConstraint& where,
                                               const Formula& operand) {
  if (uses_regex_atoms(operand)) throw FragmentError("regex atoms must be translated to variables first");
  if (!operand.modal_free()) throw FragmentError("the witness search needs a modal-free operand: " + to_string(operand));
  if (where.kind == StartConstraint::Kind::Extends) validate_interval(sys, where.prefix);
  auto core = CoreFormula::bind(normalize(operand), sys);
  return product_search(sys, where, core, core.root());
}

std::size_t product_size(const InterpretedSystem& sys) {
  const std::size_t nv = sys.num_variables();
  std::set<std::tuple<ConfigId, bool, std::vector<std::uint32_t>>> seen;
  std::deque<std::tuple<ConfigId, bool, std::vector<std::uint32_t>>> queue;
  auto push = [&](ConfigId g, bool point, std::vector<std::uint32_t> q) {
    auto key = std::make_tuple(g, point, std::move(q));
    if (seen.insert(key).second) queue.push_back(std::move(key));
  };
  for (ConfigId g : sys.reachable_configs()) {
    std::vector<std::uint32_t> q(nv);
    for (std::size_t v = 0; v < nv; ++v) q[v] = sys.dfa(v).step(sys.dfa(v).initial(), g);
    push(g, true, std::move(q));
  }
  while (!queue.empty()) {
    auto [g, point, q] = queue.front();
    queue.pop_front();
    for (ConfigId h : sys.successors(g)) {
      auto r = q;
      for (std::size_t v = 0; v < nv; ++v) r[v] = sys.dfa(v).step(r[v], h);
      push(h, false, std::move(r));
    }
  }
  return seen.size();
}

// ---- modal context trees ----

std::size_t Mct::num_nodes() const {
  std::size_t n = 1;
  for (const auto& [_, kids] : children)
    for (const auto& k : kids) n += k.num_nodes();
  return n;
}

namespace {

class MctBuilder {
 public:
  MctBuilder(const InterpretedSystem& sys, const CoreFormula& f, std::size_t h) : sys_(sys), f_(f), h_(h) {}

  const Mct& build(int id, const Interval& I) {
    auto key = std::make_pair(id, I);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Mct t;
    t.first = I.first();
    t.last = I.last();
    t.point = I.is_point();
    t.states = dfa_states(sys_, I);
    for (int s : f_.top_level(id)) {
      const auto& n = f_.node(s);
      std::map<std::string, const Mct*> kids;
      for (const auto& J : related(n, I)) {
        const Mct& c = build(n.a, J);
        kids.emplace(c.key, &c);
      }
      auto& slot = t.children[f_.to_string(s)];
      for (const auto& [_, c] : kids) slot.push_back(*c);
    }
    t.key = "(" + std::to_string(t.first) + "," + std::to_string(t.last) + "," + (t.point ? "T" : "F") + ",";
    for (auto q : t.states) t.key += std::to_string(q) + ";";
    t.key += ")";
    for (const auto& [edge, kids] : t.children) {
      t.key += "{" + edge + ":";
      for (const auto& c : kids) t.key += c.key + ",";
      t.key += "}";
    }
    return memo_.emplace(std::move(key), std::move(t)).first->second;
  }

 private:
  std::vector<Interval> related(const CoreFormula::Node& n, const Interval& I) {
    using Op = CoreFormula::Op;
    if (n.op == Op::Know) return epi_class(sys_, I, n.agents[0]);
    if (n.op == Op::Common) return common_class(sys_, I, n.agents);
    switch (n.mod) {
      case Modality::A: return allen_successors(sys_, I, Relation::A, h_);
      case Modality::N: return allen_successors(sys_, I, Relation::N, h_);
      case Modality::Bbar: return allen_successors(sys_, I, Relation::Bbar, I.size() + h_);
      case Modality::L: return later_successors(sys_, I, h_);
      default: throw FragmentError("modality <" + std::string(to_string(n.mod)) + "> is outside the ABLN fragment");
    }
  }

  const InterpretedSystem& sys_;
  const CoreFormula& f_;
  std::size_t h_;
  std::map<std::pair<int, Interval>, Mct> memo_;
};

}  // namespace

Mct compute_mct(const InterpretedSystem& sys, const Interval& I, const Formula& f, std::size_t horizon) {
  if (uses_regex_atoms(f)) throw FragmentError("regex atoms must be translated to variables first");
  Formula g = normalize(f);
  if (!in_abln(g)) throw FragmentError("formula is outside the ABLN fragment: " + to_string(f));
  validate_interval(sys, I);
  auto core = CoreFormula::bind(g, sys);
  MctBuilder b(sys, core, horizon);
  return b.build(core.root(), I);
}

std::string to_dot(const InterpretedSystem& sys, const Mct& t, std::string_view graph_name) {
  std::string out = "digraph " + std::string(graph_name) + " {\n  node [shape=box];\n";
  int next = 0;
  auto emit = [&](auto&& self, const Mct& m) -> int {
    int me = next++;
    std::string label = sys.config_name(m.first) + ", " + sys.config_name(m.last) + ", " + (m.point ? "⊤" : "⊥") + ", {";
    for (std::size_t v = 0; v < m.states.size(); ++v)
      label += (v ? ", " : "") + sys.variable(v) + ":z" + std::to_string(m.states[v]);
    label += "}";
    out += "  n" + std::to_string(me) + " [label=\"" + label + "\"];\n";
    for (const auto& [edge, kids] : m.children)
      for (const auto& c : kids) {
        int k = self(self, c);
        std::string esc;
        for (char ch : edge) {
          if (ch == '"' || ch == '\\') esc += '\\';
          esc += ch;
        }
        out += "  n" + std::to_string(me) + " -> n" + std::to_string(k) + " [label=\"" + esc + "\"];\n";
      }
    return me;
  };
  emit(emit, t);
  out += "}\n";
  return out;
}

}  // namespace ehs
