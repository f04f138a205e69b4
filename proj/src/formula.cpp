#include "ehs/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ehs/error.hpp"

namespace ehs {

namespace {

constexpr std::string_view kModalityNames[] = {"A", "Abar", "B", "Bbar", "D", "Dbar", "E",
                                               "Ebar", "L", "Lbar", "N", "Nbar", "O", "Obar"};

}  // namespace

std::string_view to_string(Modality m) { return kModalityNames[static_cast<int>(m)]; }

std::optional<Modality> parse_modality(std::string_view name) {
  for (int i = 0; i < 14; ++i)
    if (kModalityNames[i] == name) return static_cast<Modality>(i);
  return std::nullopt;
}

bool needs_history(Modality m) {
  switch (m) {
    case Modality::Abar:
    case Modality::Dbar:
    case Modality::Ebar:
    case Modality::Lbar:
    case Modality::Nbar:
    case Modality::Obar: return true;
    default: return false;
  }
}

Letter Letter::set(std::vector<std::string> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return {Kind::Set, std::move(vs)};
}

std::string to_string(const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::Pos: return l.vars[0];
    case Letter::Kind::Neg: return "!" + l.vars[0];
    case Letter::Kind::Top: return "T";
    case Letter::Kind::Set: {
      std::string s = "[";
      for (std::size_t i = 0; i < l.vars.size(); ++i) s += (i ? "," : "") + l.vars[i];
      return s + "]";
    }
  }
  return {};
}

std::string to_string(const LetterRegex& r) {
  return to_string(r, [](const Letter& l) { return to_string(l); });
}

// --- construction ----------------------------------------------------------

Formula Formula::make(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

Formula Formula::truth() { return make({Kind::True}); }
Formula Formula::falsity() { return make({Kind::False}); }
Formula Formula::pi() { return make({Kind::Pi}); }
Formula Formula::var(std::string name) {
  Node n{Kind::Var};
  n.name = std::move(name);
  return make(std::move(n));
}
Formula Formula::atom(LetterRegex r) {
  Node n{Kind::Atom};
  n.regex = std::move(r);
  return make(std::move(n));
}
Formula Formula::negate(Formula f) {
  Node n{Kind::Not};
  n.kids = {std::move(f)};
  return make(std::move(n));
}
Formula Formula::conj(Formula a, Formula b) {
  Node n{Kind::And};
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}
Formula Formula::disj(Formula a, Formula b) {
  Node n{Kind::Or};
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}
Formula Formula::implies(Formula a, Formula b) {
  Node n{Kind::Implies};
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}
Formula Formula::know(std::string agent, Formula f) {
  Node n{Kind::Know};
  n.agents = {std::move(agent)};
  n.kids = {std::move(f)};
  return make(std::move(n));
}
Formula Formula::common(std::vector<std::string> agents, Formula f) {
  if (agents.empty()) throw Error("common knowledge needs a non-empty group");
  Node n{Kind::Common};
  n.agents = std::move(agents);
  n.kids = {std::move(f)};
  return make(std::move(n));
}
Formula Formula::diamond(Modality m, Formula f) {
  Node n{Kind::Diamond};
  n.mod = m;
  n.kids = {std::move(f)};
  return make(std::move(n));
}
Formula Formula::box(Modality m, Formula f) {
  Node n{Kind::Box};
  n.mod = m;
  n.kids = {std::move(f)};
  return make(std::move(n));
}

bool Formula::is_modal() const noexcept {
  switch (kind()) {
    case Kind::Know:
    case Kind::Common:
    case Kind::Diamond:
    case Kind::Box: return true;
    default: return false;
  }
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& k : n_->kids) n += k.size();
  return n;
}

std::size_t Formula::modal_depth() const {
  std::size_t d = 0;
  for (const auto& k : n_->kids) d = std::max(d, k.modal_depth());
  return d + (is_modal() ? 1 : 0);
}

bool Formula::modal_free() const { return modal_depth() == 0; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  const auto& x = *a.n_;
  const auto& y = *b.n_;
  return x.kind == y.kind && x.name == y.name && x.agents == y.agents && x.mod == y.mod && x.kids == y.kids &&
         (x.kind != Formula::Kind::Atom || x.regex == y.regex);
}

// --- parsing ---------------------------------------------------------------

namespace {

struct Tok {
  enum class K { LParen, RParen, Not, And, Or, Implies, Diamond, Box, Know, Common, Atom, Ident, End };
  K kind;
  std::string text;  // identifier, modality name, regex body
  std::vector<std::string> agents;
  std::size_t pos;
  std::size_t body_pos = 0;  // regex body offset for atoms
};

bool id_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.'; }

std::vector<Tok> tokenize(std::string_view s) {
  using K = Tok::K;
  std::vector<Tok> out;
  std::size_t i = 0;
  auto ident_at = [&](std::size_t j) {
    std::size_t k = j;
    while (k < s.size() && id_char(s[k])) ++k;
    return k;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t pos = i;
    if (c == '(') {
      out.push_back({K::LParen, "(", {}, pos});
      ++i;
    } else if (c == ')') {
      out.push_back({K::RParen, ")", {}, pos});
      ++i;
    } else if (c == '!' || c == '~') {
      out.push_back({K::Not, "!", {}, pos});
      ++i;
    } else if (c == '&') {
      out.push_back({K::And, "&", {}, pos});
      i += (i + 1 < s.size() && s[i + 1] == '&') ? 2 : 1;
    } else if (c == '|') {
      out.push_back({K::Or, "|", {}, pos});
      i += (i + 1 < s.size() && s[i + 1] == '|') ? 2 : 1;
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({K::Implies, "->", {}, pos});
      i += 2;
    } else if (c == '<' || c == '[') {
      char close = c == '<' ? '>' : ']';
      auto end = s.find(close, i + 1);
      if (end == std::string_view::npos) throw ParseError(std::string("unterminated modality '") + c + "'", pos);
      std::string name;
      for (char ch : s.substr(i + 1, end - i - 1))
        if (!std::isspace(static_cast<unsigned char>(ch))) name += ch;
      if (!parse_modality(name)) throw ParseError("unknown modality '" + name + "'", pos);
      out.push_back({c == '<' ? K::Diamond : K::Box, name, {}, pos});
      i = end + 1;
    } else if (c == '{') {
      auto end = s.find('}', i + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated regex atom", pos);
      Tok t{K::Atom, std::string(s.substr(i + 1, end - i - 1)), {}, pos};
      t.body_pos = i + 1;
      out.push_back(std::move(t));
      i = end + 1;
    } else if (id_start(c)) {
      std::size_t k = ident_at(i);
      std::string word(s.substr(i, k - i));
      std::size_t j = k;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if ((word == "K" || word == "C") && j < s.size() && s[j] == '{') {
        auto end = s.find('}', j);
        if (end == std::string_view::npos) throw ParseError("unterminated agent list", j);
        std::vector<std::string> agents;
        std::string_view body = s.substr(j + 1, end - j - 1);
        std::size_t at = j + 1;
        for (;;) {
          auto comma = body.find(',');
          auto part = body.substr(0, comma);
          std::size_t lead = 0;
          while (lead < part.size() && std::isspace(static_cast<unsigned char>(part[lead]))) ++lead;
          part.remove_prefix(lead);
          while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back()))) part.remove_suffix(1);
          if (part.empty() || !std::all_of(part.begin(), part.end(), id_char))
            throw ParseError("malformed agent in '" + word + "{...}'", at + lead);
          agents.emplace_back(part);
          if (comma == std::string_view::npos) break;
          body.remove_prefix(comma + 1);
          at += comma + 1;
        }
        if (word == "K" && agents.size() != 1) throw ParseError("K{...} takes exactly one agent", pos);
        out.push_back({word == "K" ? K::Know : K::Common, word, std::move(agents), pos});
        i = end + 1;
      } else {
        out.push_back({K::Ident, std::move(word), {}, pos});
        i = k;
      }
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({K::End, "end of input", {}, s.size()});
  return out;
}

LetterRegex parse_letter_regex(std::string_view body, std::size_t base) {
  auto resolve = [](const std::string& tok, std::size_t pos) -> Letter {
    if (tok == "T") return Letter::top();
    if (tok.front() == '!') return Letter::neg(tok.substr(1));
    if (tok.front() == '[') {
      std::vector<std::string> vs;
      std::string cur;
      for (char c : tok.substr(1, tok.size() - 2)) {
        if (c == ',') {
          vs.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!cur.empty()) vs.push_back(cur);
      return Letter::set(std::move(vs));
    }
    if (tok.front() == '(') throw ParseError("tuples are not letter predicates", pos);
    return Letter::pos(tok);
  };
  return parse_regex_with<Letter>(body, resolve, base);
}

class Parser {
 public:
  Parser(std::vector<Tok> toks, Logic logic) : toks_(std::move(toks)), logic_(logic) {}

  Formula parse() {
    Formula f = implication();
    if (peek().kind != Tok::K::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Tok& peek() const { return toks_[i_]; }
  const Tok& next() { return toks_[i_++]; }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::K::Implies) {
      next();
      return Formula::implies(std::move(lhs), implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Tok::K::Or) {
      next();
      f = Formula::disj(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (peek().kind == Tok::K::And) {
      next();
      f = Formula::conj(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    using K = Tok::K;
    const Tok& t = peek();
    switch (t.kind) {
      case K::Not: next(); return Formula::negate(unary());
      case K::Diamond: {
        auto m = *parse_modality(next().text);
        return Formula::diamond(m, unary());
      }
      case K::Box: {
        auto m = *parse_modality(next().text);
        return Formula::box(m, unary());
      }
      case K::Know: {
        auto a = next().agents[0];
        return Formula::know(std::move(a), unary());
      }
      case K::Common: {
        auto a = next().agents;
        return Formula::common(std::move(a), unary());
      }
      default: return primary();
    }
  }

  Formula primary() {
    using K = Tok::K;
    const Tok& t = next();
    switch (t.kind) {
      case K::LParen: {
        Formula f = implication();
        if (peek().kind != K::RParen) throw ParseError("expected ')'", peek().pos);
        next();
        return f;
      }
      case K::Ident:
        if (t.text == "pi") return Formula::pi();
        if (t.text == "true") return Formula::truth();
        if (t.text == "false") return Formula::falsity();
        if (logic_ == Logic::RE) return Formula::atom(LetterRegex::leaf(Letter::pos(t.text)));
        return Formula::var(t.text);
      case K::Atom:
        if (logic_ != Logic::RE) throw ParseError("regex atoms need the RE logic", t.pos);
        return Formula::atom(parse_letter_regex(t.text, t.body_pos));
      case K::End: throw ParseError("unexpected end of formula", t.pos);
      default: throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Tok> toks_;
  Logic logic_;
  std::size_t i_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, Logic logic) { return Parser(tokenize(text), logic).parse(); }

// --- printing --------------------------------------------------------------

std::string to_string(const Formula& f) {
  using K = Formula::Kind;
  auto sub = [](const Formula& c) { return c.is_binary() ? "(" + to_string(c) + ")" : to_string(c); };
  auto agents = [](const std::vector<std::string>& a) {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + a[i];
    return s;
  };
  switch (f.kind()) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Pi: return "pi";
    case K::Var: return f.name();
    case K::Atom: return "{" + to_string(f.regex()) + "}";
    case K::Not: return "!" + sub(f.child());
    case K::And: return sub(f.child(0)) + " & " + sub(f.child(1));
    case K::Or: return sub(f.child(0)) + " | " + sub(f.child(1));
    case K::Implies: return sub(f.child(0)) + " -> " + sub(f.child(1));
    case K::Know: return "K{" + agents(f.agents()) + "} " + sub(f.child());
    case K::Common: return "C{" + agents(f.agents()) + "} " + sub(f.child());
    case K::Diamond: return "<" + std::string(to_string(f.modality())) + "> " + sub(f.child());
    case K::Box: return "[" + std::string(to_string(f.modality())) + "] " + sub(f.child());
  }
  return {};
}

// --- queries and rewrites --------------------------------------------------

bool uses_regex_atoms(const Formula& f) {
  if (f.kind() == Formula::Kind::Atom) return true;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (uses_regex_atoms(f.child(i))) return true;
  return false;
}

std::vector<std::string> variables_of(const Formula& f) {
  std::vector<std::string> out;
  auto add = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (g.kind() == Formula::Kind::Var) add(g.name());
    if (g.kind() == Formula::Kind::Atom)
      g.regex().for_each_leaf([&](const Letter& l) {
        for (const auto& v : l.vars) add(v);
      });
    for (std::size_t i = 0; i < g.arity(); ++i) self(self, g.child(i));
  };
  walk(walk, f);
  return out;
}

namespace {

Formula neg(Formula f) {
  if (f.kind() == Formula::Kind::Not) return f.child();
  return Formula::negate(std::move(f));
}

// Rebuilds `f` with children mapped by `g`.
template <class G>
Formula rebuild(const Formula& f, G&& g) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not: return Formula::negate(g(f.child()));
    case K::And: return Formula::conj(g(f.child(0)), g(f.child(1)));
    case K::Or: return Formula::disj(g(f.child(0)), g(f.child(1)));
    case K::Implies: return Formula::implies(g(f.child(0)), g(f.child(1)));
    case K::Know: return Formula::know(f.agents()[0], g(f.child()));
    case K::Common: return Formula::common(f.agents(), g(f.child()));
    case K::Diamond: return Formula::diamond(f.modality(), g(f.child()));
    case K::Box: return Formula::box(f.modality(), g(f.child()));
    default: return f;
  }
}

}  // namespace

Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
  if (f.kind() == Formula::Kind::Var || f.kind() == Formula::Kind::Atom) return fn(f);
  return rebuild(f, [&](const Formula& c) { return map_atoms(c, fn); });
}

Formula normalize(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::False: return Formula::negate(Formula::truth());
    case K::Not: return neg(normalize(f.child()));
    case K::Or: return neg(Formula::conj(neg(normalize(f.child(0))), neg(normalize(f.child(1)))));
    case K::Implies: return neg(Formula::conj(normalize(f.child(0)), neg(normalize(f.child(1)))));
    case K::Box: return neg(Formula::diamond(f.modality(), neg(normalize(f.child()))));
    default: return rebuild(f, [](const Formula& c) { return normalize(c); });
  }
}

Formula eliminate_L(const Formula& f) {
  using K = Formula::Kind;
  if (f.is_temporal() && f.modality() == Modality::L) {
    Formula inner = eliminate_L(f.child());
    auto wrap = [](Formula x) {
      return Formula::diamond(Modality::A,
                              Formula::conj(Formula::negate(Formula::pi()), Formula::diamond(Modality::A, std::move(x))));
    };
    if (f.kind() == K::Diamond) return wrap(std::move(inner));
    return Formula::negate(wrap(Formula::negate(std::move(inner))));
  }
  return rebuild(f, [](const Formula& c) { return eliminate_L(c); });
}

Formula expand_N(const Formula& f, bool literal) {
  using K = Formula::Kind;
  if (f.is_temporal() && f.modality() == Modality::N) {
    Formula inner = expand_N(f.child(), literal);
    auto unit = literal ? Formula::diamond(Modality::B, Formula::diamond(Modality::B, Formula::falsity()))
                        : Formula::box(Modality::B, Formula::box(Modality::B, Formula::falsity()));
    auto wrap = [&](Formula x) {
      return Formula::diamond(
          Modality::A, Formula::conj(Formula::negate(Formula::pi()),
                                     Formula::conj(unit, Formula::diamond(Modality::A, std::move(x)))));
    };
    if (f.kind() == K::Diamond) return wrap(std::move(inner));
    return Formula::negate(wrap(Formula::negate(std::move(inner))));
  }
  return rebuild(f, [literal](const Formula& c) { return expand_N(c, literal); });
}

std::string_view to_string(Fragment fr) {
  switch (fr) {
    case Fragment::BDE: return "BDE";
    case Fragment::ABLN: return "ABLN";
    case Fragment::Full: return "Full";
  }
  return "?";
}

namespace {

void collect_modalities(const Formula& f, std::set<Modality>& out) {
  if (f.is_temporal()) out.insert(f.modality());
  for (std::size_t i = 0; i < f.arity(); ++i) collect_modalities(f.child(i), out);
}

bool within(const Formula& f, std::initializer_list<Modality> allowed) {
  std::set<Modality> used;
  collect_modalities(f, used);
  for (Modality m : used)
    if (std::find(allowed.begin(), allowed.end(), m) == allowed.end()) return false;
  return true;
}

}  // namespace

bool in_bde(const Formula& f) { return within(f, {Modality::B, Modality::D, Modality::E}); }
bool in_abln(const Formula& f) { return within(f, {Modality::A, Modality::Bbar, Modality::L, Modality::N}); }

Fragment fragment_of(const Formula& f) {
  if (in_bde(f)) return Fragment::BDE;
  if (in_abln(f)) return Fragment::ABLN;
  return Fragment::Full;
}

std::vector<Formula> top_level_subformulas(const Formula& f) {
  std::vector<Formula> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (g.is_modal()) {
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
      return;
    }
    for (std::size_t i = 0; i < g.arity(); ++i) self(self, g.child(i));
  };
  walk(walk, normalize(f));
  return out;
}

}  // namespace ehs
