#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "ehs/dfa.hpp"
#include "support.hpp"

using namespace ehs;
using ehs::testing::all_words;

namespace {

auto g3() { return std::make_shared<const Alphabet>(std::vector<std::string>{"g1", "g2", "g3"}); }

RegexExpr random_regex(std::mt19937& rng, std::size_t k, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
  switch (pick(rng)) {
    case 0: return RegexExpr::empty();
    case 1: return RegexExpr::epsilon();
    case 2:
    case 3: return RegexExpr::leaf(static_cast<Symbol>(std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)));
    case 4: return RegexExpr::concat(random_regex(rng, k, depth - 1), random_regex(rng, k, depth - 1));
    case 5: return RegexExpr::alt(random_regex(rng, k, depth - 1), random_regex(rng, k, depth - 1));
    default: return RegexExpr::star(random_regex(rng, k, depth - 1));
  }
}

// Moore partition refinement from scratch; true iff every block is a singleton.
bool is_minimal(const Dfa& d) {
  const std::size_t n = d.num_states(), k = d.alphabet().size();
  std::vector<int> block(n);
  for (std::size_t s = 0; s < n; ++s) block[s] = d.accepting(static_cast<Dfa::State>(s)) ? 1 : 0;
  for (;;) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<int> key{block[s]};
      for (Symbol a = 0; a < k; ++a) key.push_back(block[d.step(static_cast<Dfa::State>(s), a)]);
      next[s] = sig.emplace(key, static_cast<int>(sig.size())).first->second;
    }
    bool same = std::set<int>(next.begin(), next.end()).size() == std::set<int>(block.begin(), block.end()).size();
    block = next;
    if (same) break;
  }
  return std::set<int>(block.begin(), block.end()).size() == n;
}

bool all_reachable(const Dfa& d) {
  std::vector<bool> seen(d.num_states(), false);
  std::vector<Dfa::State> stack{d.initial()};
  seen[d.initial()] = true;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (Symbol a = 0; a < d.alphabet().size(); ++a)
      if (!seen[d.step(s, a)]) seen[d.step(s, a)] = true, stack.push_back(d.step(s, a));
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace

TEST_CASE("parse nests concatenation to the right") {
  auto al = g3();
  auto r = parse_regex("g1 (g1+g2)* g3", *al);
  auto expect = RegexExpr::concat(
      RegexExpr::leaf(0),
      RegexExpr::concat(RegexExpr::star(RegexExpr::alt(RegexExpr::leaf(0), RegexExpr::leaf(1))), RegexExpr::leaf(2)));
  CHECK(r == expect);
  CHECK(parse_regex("g1;(g1|g2)*;g3", *al) == expect);
  CHECK(to_string(r, *al) == "g1 (g1+g2)* g3");
  CHECK(parse_regex("eps", *al).kind() == RegexExpr::Kind::Epsilon);
  CHECK(parse_regex("empty", *al).kind() == RegexExpr::Kind::Empty);
}

TEST_CASE("parse errors carry positions and symbols") {
  auto al = g3();
  try {
    parse_regex("g1 g4", *al);
    FAIL("expected an error");
  } catch (const UnknownSymbolError& e) {
    CHECK(e.token() == "g4");
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(parse_regex("g1 (g2", *al), ParseError);
  CHECK_THROWS_AS(parse_regex("g1 + ", *al), ParseError);
  CHECK_THROWS_AS(parse_regex("*", *al), ParseError);
}

TEST_CASE("denotes on the base cases and the example language") {
  auto al = g3();
  auto r = parse_regex("g1 (g1+g2)* g3", *al);
  std::vector<Symbol> w1{0, 1, 2}, w2{0, 1, 0, 1, 2}, w3{0}, w4{0, 2};
  CHECK(denotes(r, w1));
  CHECK(denotes(r, w2));
  CHECK(!denotes(r, w3));
  CHECK(denotes(r, w4));
  CHECK(!denotes(RegexExpr::empty(), w3));
  CHECK(!denotes(RegexExpr::empty(), {}));
  CHECK(denotes(RegexExpr::epsilon(), {}));
}

TEST_CASE("the example automaton") {
  auto al = g3();
  auto d = compile(parse_regex("g1 (g1+g2)* g3", *al), al);
  CHECK(d.num_states() == 4);
  CHECK(d.num_accepting() == 1);
  std::vector<Symbol> acc{0, 1, 2}, bad{2};
  CHECK(d.accepting(d.run(acc)));
  CHECK(d.run({}) == d.initial());
  REQUIRE(d.sink());
  CHECK(d.run(bad) == *d.sink());
  auto r = parse_regex("g1 (g1+g2)* g3", *al);
  for (const auto& w : all_words(3, 6)) CHECK(d.accepts(w) == denotes(r, w));
}

TEST_CASE("trivial automata") {
  auto al = g3();
  auto e = compile(RegexExpr::empty(), al);
  CHECK(e.num_states() == 1);
  CHECK(e.num_accepting() == 0);
  auto u = compile(parse_regex("(g1+g2+g3)*", *al), al);
  CHECK(u.num_states() == 1);
  CHECK(u.num_accepting() == 1);
}

TEST_CASE("compile agrees with derivatives on random expressions") {
  std::mt19937 rng(7);
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back("s" + std::to_string(i));
    auto al = std::make_shared<const Alphabet>(names);
    auto words = all_words(k, 6);
    for (int n = 0; n < 150; ++n) {
      auto r = random_regex(rng, k, 4);
      auto d = compile(r, al);
      CHECK(is_minimal(d));
      CHECK(all_reachable(d));
      DerivativeMatcher m(r, [](Symbol leaf, Symbol s) { return leaf == s; });
      for (const auto& w : words) {
        REQUIRE(d.accepts(w) == m.matches(w));
        for (std::size_t cut = 0; cut <= w.size(); ++cut) {
          std::span<const Symbol> ws(w);
          CHECK(d.run(ws) == d.run_from(d.run(ws.first(cut)), ws.subspan(cut)));
        }
      }
    }
  }
}

TEST_CASE("language shapes") {
  auto al = g3();
  auto shape = [&](const char* t) { return language_shape(compile(parse_regex(t, *al), al)); };
  CHECK(shape("g1+g2") == LanguageShape::PointBased);
  CHECK(shape("g1 + g1 (g1+g2+g3)* g3") == LanguageShape::EndpointBased);
  CHECK(shape("g1 (g1+g2)* g3") == LanguageShape::General);
  CHECK(shape("eps + g1") == LanguageShape::General);
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<RegexExpr> t;
    for (Symbol s = 0; s < 3; ++s)
      if (mask & (1u << s)) t.push_back(RegexExpr::leaf(s));
    CHECK(language_shape(compile(RegexExpr::sum(t), al)) == LanguageShape::PointBased);
  }
}

TEST_CASE("endpoint shape matches brute force") {
  // Membership depends only on (first, last, length==1) over all words <= 5.
  std::mt19937 rng(11);
  auto al = g3();
  auto words = all_words(3, 5);
  for (int n = 0; n < 200; ++n) {
    auto r = random_regex(rng, 3, 4);
    auto d = compile(r, al);
    auto shape = language_shape(d);
    bool point = true, endpoint = !denotes(r, {});
    std::map<std::tuple<Symbol, Symbol, bool>, bool> seen;
    for (const auto& w : words) {
      if (w.empty()) continue;
      bool in = denotes(r, w);
      if (in && w.size() != 1) point = false;
      auto key = std::make_tuple(w.front(), w.back(), w.size() == 1);
      auto [it, fresh] = seen.emplace(key, in);
      if (!fresh && it->second != in) endpoint = false;
    }
    point = point && !denotes(r, {});
    if (point)
      CHECK(shape == LanguageShape::PointBased);
    else if (endpoint)
      CHECK(shape == LanguageShape::EndpointBased);
    else
      CHECK(shape == LanguageShape::General);
  }
}

TEST_CASE("dot export marks accepting and sink states") {
  auto al = g3();
  auto dot = to_dot(compile(parse_regex("g1 (g1+g2)* g3", *al), al));
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("dashed") != std::string::npos);
  CHECK(dot.find("z3") != std::string::npos);
}
