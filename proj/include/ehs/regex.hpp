#pragma once

// Regular expressions over a finite alphabet of opaque symbols.
//
// The AST is generic over its leaf type so the same machinery serves
// labellings (leaves are global configurations) and the regex atoms of
// EHS^RE formulas (leaves are letter predicates over variables).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ehs/error.hpp"

namespace ehs {

using Symbol = std::uint32_t;

// Ordered, duplicate-free, non-empty set of symbol names. A symbol is its
// index in this order.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<Symbol> find(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> index_;
};

template <class LeafT>
class BasicRegex {
 public:
  enum class Kind { Empty, Epsilon, Leaf, Concat, Union, Star };

  static BasicRegex empty() { return BasicRegex(make(Kind::Empty)); }
  static BasicRegex epsilon() { return BasicRegex(make(Kind::Epsilon)); }
  static BasicRegex leaf(LeafT value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Leaf;
    n->leaf = std::move(value);
    return BasicRegex(std::move(n));
  }
  static BasicRegex concat(BasicRegex a, BasicRegex b) {
    return binary(Kind::Concat, std::move(a), std::move(b));
  }
  static BasicRegex alt(BasicRegex a, BasicRegex b) {
    return binary(Kind::Union, std::move(a), std::move(b));
  }
  static BasicRegex star(BasicRegex a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Star;
    n->kids.push_back(std::move(a));
    return BasicRegex(std::move(n));
  }

  // Right-nested union of the given alternatives; empty() for none.
  static BasicRegex sum(std::vector<BasicRegex> terms) {
    if (terms.empty()) return empty();
    BasicRegex out = std::move(terms.back());
    for (std::size_t i = terms.size() - 1; i-- > 0;) out = alt(std::move(terms[i]), std::move(out));
    return out;
  }

  BasicRegex() : BasicRegex(empty()) {}

  Kind kind() const noexcept { return node_->kind; }
  const LeafT& leaf_value() const { return node_->leaf; }
  const BasicRegex& left() const { return node_->kids.at(0); }
  const BasicRegex& right() const { return node_->kids.at(1); }
  const BasicRegex& inner() const { return node_->kids.at(0); }

  // Number of AST nodes.
  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& k : node_->kids) n += k.size();
    return n;
  }

  // Structure-preserving leaf substitution.
  template <class F>
  auto map_leaves(F&& f) const -> BasicRegex<std::decay_t<decltype(f(std::declval<const LeafT&>()))>> {
    using Out = BasicRegex<std::decay_t<decltype(f(std::declval<const LeafT&>()))>>;
    switch (kind()) {
      case Kind::Empty: return Out::empty();
      case Kind::Epsilon: return Out::epsilon();
      case Kind::Leaf: return Out::leaf(f(leaf_value()));
      case Kind::Concat: return Out::concat(left().map_leaves(f), right().map_leaves(f));
      case Kind::Union: return Out::alt(left().map_leaves(f), right().map_leaves(f));
      case Kind::Star: return Out::star(inner().map_leaves(f));
    }
    return Out::empty();
  }

  // Replace each leaf by an arbitrary sub-expression.
  template <class Out, class F>
  Out substitute(F&& f) const {
    switch (kind()) {
      case Kind::Empty: return Out::empty();
      case Kind::Epsilon: return Out::epsilon();
      case Kind::Leaf: return f(leaf_value());
      case Kind::Concat: return Out::concat(left().template substitute<Out>(f), right().template substitute<Out>(f));
      case Kind::Union: return Out::alt(left().template substitute<Out>(f), right().template substitute<Out>(f));
      case Kind::Star: return Out::star(inner().template substitute<Out>(f));
    }
    return Out::empty();
  }

  template <class F>
  void for_each_leaf(F&& f) const {
    if (kind() == Kind::Leaf) {
      f(leaf_value());
      return;
    }
    for (const auto& k : node_->kids) k.for_each_leaf(f);
  }

  friend bool operator==(const BasicRegex& a, const BasicRegex& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.kind() == Kind::Leaf) return a.leaf_value() == b.leaf_value();
    return a.node_->kids == b.node_->kids;
  }

 private:
  struct Node {
    Kind kind = Kind::Empty;
    LeafT leaf{};
    std::vector<BasicRegex> kids;
  };

  explicit BasicRegex(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
  }
  static BasicRegex binary(Kind k, BasicRegex a, BasicRegex b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids.push_back(std::move(a));
    n->kids.push_back(std::move(b));
    return BasicRegex(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

using RegexExpr = BasicRegex<Symbol>;

// ---------------------------------------------------------------------------
// Concrete syntax
//
//   union   := concat (("+" | "|") concat)*          right-nested
//   concat  := postfix ((";")? postfix)*             right-nested
//   postfix := primary "*"*
//   primary := leaf | "empty" | "eps" | "(" union ")"
//
// Leaf tokens are identifiers, "!"-prefixed identifiers, parenthesised tuples
// "(a,b,...)" and bracketed sets "[a,b,...]"; what they denote is up to the
// caller's resolver.

struct RegexToken {
  enum class Kind { LParen, RParen, Union, Semi, Star, Empty, Eps, Leaf, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

std::vector<RegexToken> tokenize_regex(std::string_view text, std::size_t base = 0);

namespace detail {

template <class Leaf, class Resolve>
class RegexParser {
 public:
  using R = BasicRegex<Leaf>;
  RegexParser(std::vector<RegexToken> toks, Resolve& resolve) : toks_(std::move(toks)), resolve_(resolve) {}

  R parse() {
    R r = parse_union();
    if (peek().kind != RegexToken::Kind::End) throw ParseError("unexpected '" + peek().text + "' in regex", peek().pos);
    return r;
  }

 private:
  const RegexToken& peek() const { return toks_[i_]; }
  const RegexToken& next() { return toks_[i_++]; }

  bool starts_factor(const RegexToken& t) const {
    using K = RegexToken::Kind;
    return t.kind == K::LParen || t.kind == K::Leaf || t.kind == K::Empty || t.kind == K::Eps;
  }

  R parse_union() {
    std::vector<R> parts{parse_concat()};
    while (peek().kind == RegexToken::Kind::Union) {
      next();
      parts.push_back(parse_concat());
    }
    return fold(parts, &R::alt);
  }

  R parse_concat() {
    std::vector<R> parts{parse_postfix()};
    for (;;) {
      if (peek().kind == RegexToken::Kind::Semi) {
        next();
        parts.push_back(parse_postfix());
      } else if (starts_factor(peek())) {
        parts.push_back(parse_postfix());
      } else {
        break;
      }
    }
    return fold(parts, &R::concat);
  }

  R parse_postfix() {
    R r = parse_primary();
    while (peek().kind == RegexToken::Kind::Star) {
      next();
      r = R::star(std::move(r));
    }
    return r;
  }

  R parse_primary() {
    using K = RegexToken::Kind;
    const RegexToken& t = next();
    switch (t.kind) {
      case K::Empty: return R::empty();
      case K::Eps: return R::epsilon();
      case K::Leaf: return R::leaf(resolve_(t.text, t.pos));
      case K::LParen: {
        R r = parse_union();
        if (peek().kind != K::RParen) throw ParseError("expected ')' in regex", peek().pos);
        next();
        return r;
      }
      case K::End: throw ParseError("unexpected end of regex", t.pos);
      default: throw ParseError("unexpected '" + t.text + "' in regex", t.pos);
    }
  }

  static R fold(std::vector<R>& parts, R (*op)(R, R)) {
    R out = std::move(parts.back());
    for (std::size_t k = parts.size() - 1; k-- > 0;) out = op(std::move(parts[k]), std::move(out));
    return out;
  }

  std::vector<RegexToken> toks_;
  Resolve& resolve_;
  std::size_t i_ = 0;
};

}  // namespace detail

// `resolve(token_text, position) -> Leaf` may throw UnknownSymbolError.
template <class Leaf, class Resolve>
BasicRegex<Leaf> parse_regex_with(std::string_view text, Resolve resolve, std::size_t base = 0) {
  detail::RegexParser<Leaf, Resolve> p(tokenize_regex(text, base), resolve);
  return p.parse();
}

using SymbolLookup = std::function<std::optional<Symbol>(std::string_view)>;

RegexExpr parse_regex(std::string_view text, const Alphabet& alphabet);
RegexExpr parse_regex(std::string_view text, const SymbolLookup& lookup, std::size_t base = 0);

// Printing with minimal parentheses; concatenation by juxtaposition.
template <class Leaf, class Print>
std::string to_string(const BasicRegex<Leaf>& r, Print&& print_leaf, int context = 0) {
  using K = typename BasicRegex<Leaf>::Kind;
  auto wrap = [&](std::string s, int prec) { return prec < context ? "(" + s + ")" : s; };
  switch (r.kind()) {
    case K::Empty: return "empty";
    case K::Epsilon: return "eps";
    case K::Leaf: return print_leaf(r.leaf_value());
    case K::Union:
      return wrap(to_string(r.left(), print_leaf, 1) + "+" + to_string(r.right(), print_leaf, 0), 0);
    case K::Concat:
      return wrap(to_string(r.left(), print_leaf, 2) + " " + to_string(r.right(), print_leaf, 1), 1);
    case K::Star: return to_string(r.inner(), print_leaf, 3) + "*";
  }
  return {};
}

std::string to_string(const RegexExpr& r, const Alphabet& alphabet);

// ---------------------------------------------------------------------------
// Membership by Brzozowski derivatives. Terms are hash-consed modulo
// associativity/commutativity/idempotence of union, so the set of reachable
// derivatives is finite and every step is a table lookup once explored.
// Shares nothing with the Thompson/subset/Hopcroft pipeline in dfa.hpp.

class DerivativeMatcher {
 public:
  using State = int;
  using LeafTest = std::function<bool(Symbol)>;

  template <class Leaf, class Match>
  DerivativeMatcher(const BasicRegex<Leaf>& r, Match&& match) {
    root_ = build(r, match);
  }

  State initial() const noexcept { return root_; }
  State step(State s, Symbol a);
  bool accepting(State s) { return nullable(s); }
  bool matches(std::span<const Symbol> word);
  std::size_t explored_terms() const noexcept { return terms_.size(); }

 private:
  enum class T { Empty, Epsilon, Leaf, Concat, Union, Star };
  struct Term {
    T kind;
    int a = -1;
    int b = -1;
    std::vector<int> alts = {};
  };

  template <class Leaf, class Match>
  int build(const BasicRegex<Leaf>& r, Match& match) {
    using K = typename BasicRegex<Leaf>::Kind;
    switch (r.kind()) {
      case K::Empty: return kEmpty;
      case K::Epsilon: return kEps;
      case K::Leaf: {
        const Leaf& v = r.leaf_value();
        leaves_.push_back([v, m = std::function<bool(const Leaf&, Symbol)>(match)](Symbol s) { return m(v, s); });
        return mk_leaf(static_cast<int>(leaves_.size()) - 1);
      }
      case K::Concat: return mk_concat(build(r.left(), match), build(r.right(), match));
      case K::Union: return mk_union({build(r.left(), match), build(r.right(), match)});
      case K::Star: return mk_star(build(r.inner(), match));
    }
    return kEmpty;
  }

  static constexpr int kEmpty = 0;
  static constexpr int kEps = 1;

  int intern(Term t);
  int mk_leaf(int leaf);
  int mk_concat(int a, int b);
  int mk_union(std::vector<int> alts);
  int mk_star(int a);
  bool nullable(int t);
  int derive(int t, Symbol a);

  std::vector<Term> terms_{Term{T::Empty}, Term{T::Epsilon}};
  std::vector<signed char> nullable_{0, 1};
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::uint64_t, int> deriv_;
  std::vector<LeafTest> leaves_;
  int root_ = kEmpty;
};

// word ∈ L(r), decided without constructing any automaton up front.
bool denotes(const RegexExpr& r, std::span<const Symbol> word);

}  // namespace ehs
