#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ehs/core.hpp"
#include "gen.hpp"
#include "support.hpp"

using namespace ehs;
using F = Formula;

TEST_CASE("parse the worked example") {
  auto f = parse_plus("K{0} pi & !<A> p");
  auto expect = F::conj(F::know("0", F::pi()), F::negate(F::diamond(Modality::A, F::var("p"))));
  CHECK(f == expect);
  CHECK(to_string(f) == "K{0} pi & !<A> p");
}

TEST_CASE("precedence and associativity") {
  auto p = F::var("p"), q = F::var("q"), r = F::var("r");
  CHECK(parse_plus("p -> q -> r") == F::implies(p, F::implies(q, r)));
  CHECK(parse_plus("p | q & r") == F::disj(p, F::conj(q, r)));
  CHECK(parse_plus("p & q | r -> p") == F::implies(F::disj(F::conj(p, q), r), p));
  CHECK(parse_plus("!p & q") == F::conj(F::negate(p), q));
  CHECK(parse_plus("<A> p & q") == F::conj(F::diamond(Modality::A, p), q));
  CHECK(parse_plus("[Bbar] (p | q)") == F::box(Modality::Bbar, F::disj(p, q)));
  CHECK(parse_plus("C{0, env} false") == F::common({"0", "env"}, F::falsity()));
  CHECK(parse_plus("<Obar><Lbar>true") == F::diamond(Modality::Obar, F::diamond(Modality::Lbar, F::truth())));
}

TEST_CASE("regex atoms") {
  auto f = parse_re("{p ; T*}");
  auto r = LetterRegex::concat(LetterRegex::leaf(Letter::pos("p")), LetterRegex::star(LetterRegex::leaf(Letter::top())));
  CHECK(f == F::atom(r));
  CHECK(to_string(f) == "{p T*}");
  auto g = parse_re("{[q,p] !q} & p");
  CHECK(g.child(0).regex().left().leaf_value() == Letter::set({"p", "q"}));
  CHECK(g.child(0).regex().right().leaf_value() == Letter::neg("q"));
  CHECK(g.child(1) == F::atom(LetterRegex::leaf(Letter::pos("p"))));
  CHECK(uses_regex_atoms(g));
  CHECK(variables_of(g) == std::vector<std::string>{"p", "q"});
}

TEST_CASE("parse errors") {
  try {
    parse_plus("<Q> p");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown modality") != std::string::npos);
    CHECK(e.position() == 0);
  }
  CHECK_THROWS_AS(parse_plus("p &"), ParseError);
  CHECK_THROWS_AS(parse_plus("(p"), ParseError);
  CHECK_THROWS_AS(parse_plus("{p}"), ParseError);
  CHECK_THROWS_AS(parse_re("{p (}"), ParseError);
  CHECK_THROWS_AS(parse_plus("K{0,1} p"), ParseError);
  CHECK_THROWS_AS(parse_plus("p $ q"), ParseError);
}

TEST_CASE("print then parse is the identity") {
  std::mt19937 rng(3);
  std::vector<std::string> vars{"p", "q"};
  for (int i = 0; i < 1000; ++i) {
    auto f = ehs::testing::random_formula(rng, 1 + static_cast<std::size_t>(i % 12), vars);
    CHECK(f.size() <= 12);
    auto text = to_string(f);
    INFO(text);
    CHECK(parse_plus(text) == f);
  }
  for (const char* t : {"{(p T)*}", "{!p + [p,q]} -> <N> {p T*}", "{eps} | {empty}", "{[]}"}) {
    auto f = parse_re(t);
    CHECK(parse_re(to_string(f)) == f);
  }
}

TEST_CASE("L elimination") {
  CHECK(eliminate_L(parse_plus("<L> p")) == parse_plus("<A>(!pi & <A> p)"));
  CHECK(eliminate_L(parse_plus("[L] p")) == parse_plus("!<A>(!pi & <A> !p)"));
  CHECK(eliminate_L(parse_plus("p")) == parse_plus("p"));
  CHECK(eliminate_L(parse_plus("K{0} <L><L> p")) == parse_plus("K{0} <A>(!pi & <A> <A>(!pi & <A> p))"));
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    auto f = eliminate_L(ehs::testing::random_formula(rng, 8, {"p"}));
    CHECK(to_string(f).find("<L>") == std::string::npos);
    CHECK(to_string(f).find("[L]") == std::string::npos);
  }
}

TEST_CASE("N expansion") {
  CHECK(expand_N(parse_plus("<N> p")) == parse_plus("<A>(!pi & ([B][B] false & <A> p))"));
  CHECK(expand_N(parse_plus("<N> p"), true) == parse_plus("<A>(!pi & (<B><B> false & <A> p))"));
  CHECK(expand_N(parse_plus("p")) == parse_plus("p"));
  auto twice = expand_N(parse_plus("<N><N> p"));
  CHECK(twice == parse_plus("<A>(!pi & ([B][B] false & <A> <A>(!pi & ([B][B] false & <A> p))))"));
}

TEST_CASE("fragments") {
  CHECK(fragment_of(parse_plus("K{0} pi & !<A> p")) == Fragment::ABLN);
  CHECK(fragment_of(parse_plus("<B><D> p")) == Fragment::BDE);
  CHECK(fragment_of(parse_plus("<A><D> p")) == Fragment::Full);
  CHECK(fragment_of(parse_plus("[E] p")) == Fragment::BDE);
  CHECK(fragment_of(parse_plus("[L] p & <Bbar> q")) == Fragment::ABLN);
  CHECK(fragment_of(parse_plus("<Abar> p")) == Fragment::Full);
  CHECK(fragment_of(parse_plus("p & C{0,1} pi")) == Fragment::BDE);
  CHECK(in_abln(parse_plus("p & C{0,1} pi")));
}

TEST_CASE("top-level subformulas") {
  auto t = top_level_subformulas(parse_plus("K{0} pi & !<A> p"));
  REQUIRE(t.size() == 2);
  CHECK(t[0] == parse_plus("K{0} pi"));
  CHECK(t[1] == parse_plus("<A> p"));
  CHECK(top_level_subformulas(parse_plus("p & pi")).empty());
  auto n = top_level_subformulas(parse_plus("<A><A> p"));
  REQUIRE(n.size() == 1);
  CHECK(n[0].child() == parse_plus("<A> p"));
  CHECK(top_level_subformulas(parse_plus("<A> p | [A] !p")).size() == 1);
  CHECK(top_level_subformulas(parse_plus("<A> p -> <N> p")).size() == 2);
}

TEST_CASE("f^IS") {
  auto sys = ehs::testing::is_ex();
  CHECK(fis_bound(sys, parse_plus("p")).value() == 288);
  BigBound::Int big = BigBound::Int(288) << 288;
  auto a = fis_bound(sys, parse_plus("<A> p"));
  REQUIRE(a.exact());
  CHECK(a.value() == big);
  CHECK(a.to_string() == "1.432e+89");
  CHECK(fis_bound(sys, parse_plus("p"), true).value() == 2 * 9 * 4 + 1);
  CHECK(fis_bound(sys, parse_plus("<L> p")).exceeds(1000));
  CHECK_THROWS_AS(fis_bound(sys, parse_plus("<D> p")), FragmentError);
  auto deep = fis_bound(sys, parse_plus("<A><A><A> p"));
  CHECK(!deep.exact());
  CHECK(deep.to_string().find("astronomical") != std::string::npos);

  auto novars = load_isrl("agent e\n states a b\n init a\n actions x\n protocol a: x\n protocol b: x\n trans a (x) b\n trans b (x) a\n");
  CHECK(fis_bound(novars, parse_plus("pi & true")).value() == 8);

  // Adding a top-level modal subformula never decreases the bound.
  std::vector<F> fs{parse_plus("p"), parse_plus("K{0} p"), parse_plus("<N> pi"), parse_plus("<Bbar> p")};
  for (const auto& x : fs)
    for (const auto& y : fs) {
      auto conj = F::conj(x, y);
      CHECK(fis_bound(sys, conj).log2() >= fis_bound(sys, x).log2());
    }
}

TEST_CASE("binding") {
  auto sys = ehs::testing::is_ex();
  auto c = CoreFormula::bind(parse_plus("(p | p) & <Abar> K{one} p"), sys);
  CHECK(c.node(c.root()).op == CoreFormula::Op::And);
  CHECK(c.node(c.root()).history);
  CHECK_THROWS_AS(CoreFormula::bind(parse_plus("q"), sys), ModelError);
  CHECK_THROWS_AS(CoreFormula::bind(parse_plus("K{7} p"), sys), ModelError);
  CHECK_THROWS_AS(CoreFormula::bind(parse_plus("K{nobody} p"), sys), ModelError);
  // shared subterms
  auto d = CoreFormula::bind(parse_plus("<A> p & !<A> p"), sys);
  CHECK(d.top_level(d.root()).size() == 1);
}
