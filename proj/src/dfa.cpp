#include "ehs/dfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace ehs {

Dfa::Dfa(std::shared_ptr<const Alphabet> alphabet, State initial, std::vector<bool> accepting,
         std::vector<State> table)
    : alphabet_(std::move(alphabet)), initial_(initial), accepting_(std::move(accepting)), table_(std::move(table)) {
  if (table_.size() != accepting_.size() * alphabet_->size()) throw ModelError("dfa table has wrong size");
  for (State t : table_)
    if (t >= accepting_.size()) throw ModelError("dfa transition out of range");
  if (initial_ >= accepting_.size()) throw ModelError("dfa initial state out of range");
}

std::size_t Dfa::num_accepting() const { return static_cast<std::size_t>(std::count(accepting_.begin(), accepting_.end(), true)); }

std::optional<Dfa::State> Dfa::sink() const {
  for (State s = 0; s < num_states(); ++s) {
    if (accepting_[s]) continue;
    bool loops = true;
    for (Symbol a = 0; a < alphabet_->size() && loops; ++a) loops = step(s, a) == s;
    if (loops) return s;
  }
  return std::nullopt;
}

namespace {

constexpr int kEpsilonEdge = -1;

struct Nfa {
  struct Edge {
    int label;  // symbol or kEpsilonEdge
    int to;
  };
  std::vector<std::vector<Edge>> out;

  int add_state() {
    out.emplace_back();
    return static_cast<int>(out.size()) - 1;
  }
  void add(int from, int label, int to) { out[from].push_back({label, to}); }
};

struct Fragment {
  int start;
  int accept;
};

Fragment thompson(Nfa& nfa, const RegexExpr& r) {
  using K = RegexExpr::Kind;
  switch (r.kind()) {
    case K::Empty: {
      int s = nfa.add_state();
      int f = nfa.add_state();
      return {s, f};
    }
    case K::Epsilon: {
      int s = nfa.add_state();
      int f = nfa.add_state();
      nfa.add(s, kEpsilonEdge, f);
      return {s, f};
    }
    case K::Leaf: {
      int s = nfa.add_state();
      int f = nfa.add_state();
      nfa.add(s, static_cast<int>(r.leaf_value()), f);
      return {s, f};
    }
    case K::Concat: {
      Fragment a = thompson(nfa, r.left());
      Fragment b = thompson(nfa, r.right());
      nfa.add(a.accept, kEpsilonEdge, b.start);
      return {a.start, b.accept};
    }
    case K::Union: {
      int s = nfa.add_state();
      Fragment a = thompson(nfa, r.left());
      Fragment b = thompson(nfa, r.right());
      int f = nfa.add_state();
      nfa.add(s, kEpsilonEdge, a.start);
      nfa.add(s, kEpsilonEdge, b.start);
      nfa.add(a.accept, kEpsilonEdge, f);
      nfa.add(b.accept, kEpsilonEdge, f);
      return {s, f};
    }
    case K::Star: {
      int s = nfa.add_state();
      Fragment a = thompson(nfa, r.inner());
      int f = nfa.add_state();
      nfa.add(s, kEpsilonEdge, a.start);
      nfa.add(s, kEpsilonEdge, f);
      nfa.add(a.accept, kEpsilonEdge, a.start);
      nfa.add(a.accept, kEpsilonEdge, f);
      return {s, f};
    }
  }
  return {0, 0};
}

std::vector<int> closure(const Nfa& nfa, std::vector<int> seed) {
  std::vector<char> seen(nfa.out.size(), 0);
  std::vector<int> stack;
  for (int s : seed)
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  std::vector<int> out;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (const auto& e : nfa.out[s])
      if (e.label == kEpsilonEdge && !seen[e.to]) {
        seen[e.to] = 1;
        stack.push_back(e.to);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct RawDfa {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t initial = 0;
  std::vector<bool> accepting;
  std::vector<std::size_t> table;
};

RawDfa determinise(const Nfa& nfa, Fragment frag, std::size_t k) {
  RawDfa d;
  d.k = k;
  std::map<std::vector<int>, std::size_t> ids;
  std::deque<std::vector<int>> work;
  auto intern = [&](std::vector<int> set) {
    auto [it, fresh] = ids.emplace(set, d.n);
    if (fresh) {
      ++d.n;
      d.accepting.push_back(std::binary_search(set.begin(), set.end(), frag.accept));
      d.table.resize(d.n * k, 0);
      work.push_back(std::move(set));
    }
    return it->second;
  };
  d.initial = intern(closure(nfa, {frag.start}));
  while (!work.empty()) {
    std::vector<int> set = std::move(work.front());
    work.pop_front();
    std::size_t from = ids.at(set);
    std::vector<std::vector<int>> moves(k);
    for (int s : set)
      for (const auto& e : nfa.out[s])
        if (e.label != kEpsilonEdge) moves[static_cast<std::size_t>(e.label)].push_back(e.to);
    for (std::size_t a = 0; a < k; ++a) {
      std::size_t to = intern(closure(nfa, std::move(moves[a])));
      d.table[from * k + a] = to;
    }
  }
  return d;
}

// Hopcroft partition refinement; returns the block of every state.
std::vector<std::size_t> hopcroft(const RawDfa& d) {
  const std::size_t n = d.n;
  const std::size_t k = d.k;
  // inverse[a][t] = states s with step(s, a) = t
  std::vector<std::vector<std::vector<std::size_t>>> inverse(k, std::vector<std::vector<std::size_t>>(n));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < k; ++a) inverse[a][d.table[s * k + a]].push_back(s);

  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> block_of(n, 0);
  {
    std::vector<std::size_t> acc;
    std::vector<std::size_t> rej;
    for (std::size_t s = 0; s < n; ++s) (d.accepting[s] ? acc : rej).push_back(s);
    for (auto* b : {&acc, &rej})
      if (!b->empty()) {
        for (std::size_t s : *b) block_of[s] = blocks.size();
        blocks.push_back(std::move(*b));
      }
  }
  std::vector<char> in_work(blocks.size(), 1);
  std::vector<std::size_t> work;
  for (std::size_t b = 0; b < blocks.size(); ++b) work.push_back(b);

  std::vector<char> marked(n, 0);
  while (!work.empty()) {
    std::size_t splitter = work.back();
    work.pop_back();
    in_work[splitter] = 0;
    const std::vector<std::size_t> members = blocks[splitter];
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<std::size_t> pre;
      for (std::size_t t : members)
        for (std::size_t s : inverse[a][t])
          if (!marked[s]) {
            marked[s] = 1;
            pre.push_back(s);
          }
      std::map<std::size_t, std::vector<std::size_t>> touched;
      for (std::size_t s : pre) touched[block_of[s]].push_back(s);
      for (auto& [b, hit] : touched) {
        if (hit.size() == blocks[b].size()) continue;
        std::vector<std::size_t> rest;
        for (std::size_t s : blocks[b])
          if (!marked[s]) rest.push_back(s);
        std::size_t nb = blocks.size();
        blocks[b] = hit;
        blocks.push_back(std::move(rest));
        in_work.push_back(0);
        for (std::size_t s : blocks[nb]) block_of[s] = nb;
        if (in_work[b]) {
          in_work[nb] = 1;
          work.push_back(nb);
        } else {
          std::size_t smaller = blocks[b].size() <= blocks[nb].size() ? b : nb;
          in_work[smaller] = 1;
          work.push_back(smaller);
        }
      }
      for (std::size_t s : pre) marked[s] = 0;
    }
  }
  return block_of;
}

}  // namespace

Dfa compile(const RegexExpr& expr, std::shared_ptr<const Alphabet> alphabet) {
  const std::size_t k = alphabet->size();
  expr.for_each_leaf([&](Symbol s) {
    if (s >= k) throw ModelError("regex symbol outside the alphabet");
  });
  Nfa nfa;
  Fragment frag = thompson(nfa, expr);
  RawDfa raw = determinise(nfa, frag, k);
  std::vector<std::size_t> block_of = hopcroft(raw);

  // Breadth-first renumbering of blocks.
  std::map<std::size_t, Dfa::State> number;
  std::vector<std::size_t> order;
  std::deque<std::size_t> queue;
  std::vector<std::size_t> representative;
  auto visit = [&](std::size_t state) {
    std::size_t b = block_of[state];
    if (number.emplace(b, static_cast<Dfa::State>(order.size())).second) {
      order.push_back(b);
      representative.push_back(state);
      queue.push_back(state);
    }
  };
  visit(raw.initial);
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < k; ++a) visit(raw.table[s * k + a]);
  }
  const std::size_t m = order.size();
  std::vector<bool> accepting(m);
  std::vector<Dfa::State> table(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t rep = representative[i];
    accepting[i] = raw.accepting[rep];
    for (std::size_t a = 0; a < k; ++a) table[i * k + a] = number.at(block_of[raw.table[rep * k + a]]);
  }
  return Dfa(std::move(alphabet), 0, std::move(accepting), std::move(table));
}

std::string_view to_string(LanguageShape shape) {
  switch (shape) {
    case LanguageShape::PointBased: return "point-based";
    case LanguageShape::EndpointBased: return "endpoint-based";
    case LanguageShape::General: return "general";
  }
  return "general";
}

namespace {

std::vector<bool> forward_closure(const Dfa& d, const std::vector<Dfa::State>& seeds) {
  std::vector<bool> seen(d.num_states(), false);
  std::vector<Dfa::State> stack;
  for (auto s : seeds)
    if (!seen[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (Symbol a = 0; a < d.alphabet().size(); ++a) {
      auto t = d.step(s, a);
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

}  // namespace

LanguageShape language_shape(const Dfa& d) {
  const std::size_t k = d.alphabet().size();
  if (d.accepting(d.initial())) return LanguageShape::General;

  std::vector<Dfa::State> after_one;
  for (Symbol a = 0; a < k; ++a) after_one.push_back(d.step(d.initial(), a));

  std::vector<Dfa::State> after_two;
  for (auto s : after_one)
    for (Symbol a = 0; a < k; ++a) after_two.push_back(d.step(s, a));
  std::vector<bool> longer = forward_closure(d, after_two);
  bool point = true;
  for (Dfa::State s = 0; s < d.num_states() && point; ++s)
    if (longer[s] && d.accepting(s)) point = false;
  if (point) return LanguageShape::PointBased;

  // For words of length >= 2 starting with `first` and ending with `last`,
  // the states reached are {step(r, last) : r reachable from step(init, first)}.
  for (Symbol first = 0; first < k; ++first) {
    std::vector<bool> mid = forward_closure(d, {after_one[first]});
    for (Symbol last = 0; last < k; ++last) {
      int verdict = -1;
      for (Dfa::State r = 0; r < d.num_states(); ++r) {
        if (!mid[r]) continue;
        int acc = d.accepting(d.step(r, last)) ? 1 : 0;
        if (verdict < 0)
          verdict = acc;
        else if (verdict != acc)
          return LanguageShape::General;
      }
    }
  }
  return LanguageShape::EndpointBased;
}

std::string to_dot(const Dfa& d, std::string_view graph_name) {
  std::ostringstream os;
  auto sink = d.sink();
  os << "digraph " << graph_name << " {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (Dfa::State s = 0; s < d.num_states(); ++s) {
    os << "  z" << s << " [shape=" << (d.accepting(s) ? "doublecircle" : "circle");
    if (sink && *sink == s) os << ", style=dashed";
    os << "];\n";
  }
  os << "  __start -> z" << d.initial() << ";\n";
  for (Dfa::State s = 0; s < d.num_states(); ++s) {
    // group symbols sharing a target into one edge label
    std::map<Dfa::State, std::string> labels;
    for (Symbol a = 0; a < d.alphabet().size(); ++a) {
      auto& l = labels[d.step(s, a)];
      if (!l.empty()) l += ",";
      l += d.alphabet().name(a);
    }
    for (const auto& [t, l] : labels) {
      os << "  z" << s << " -> z" << t << " [label=\"" << l << "\"";
      if (sink && (*sink == t)) os << ", style=dashed";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace ehs
