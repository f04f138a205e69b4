#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ehs/oracle.hpp"
#include "ehs/reductions.hpp"
#include "gen.hpp"
#include "support.hpp"

using namespace ehs;
using namespace ehs::testing;

namespace {

InterpretedSystem pair_system(const std::string& label) {
  return load_isrl(R"(
agent one
  states a b
  init a
  actions x
  protocol a: x
  protocol b: x
  trans a (x) b
  trans b (x) a
config g1 = (a)
config g2 = (b)
label p = )" + label + "\n");
}

std::string show(const InterpretedSystem& sys, const RegexExpr& r) { return to_string(r, *sys.config_alphabet()); }

LetterRegex letters(const std::string& text) { return parse_re("{" + text + "}").regex(); }

}  // namespace

TEST_CASE("lambda composition") {
  auto sys = pair_system("g1");
  CHECK(show(sys, lambda_compose(sys, letters("p;T*"))) == "g1 (g1+g2)*");
  CHECK(show(sys, lambda_compose(sys, letters("(!p)*"))) == "g2*");
  CHECK(show(sys, lambda_compose(sys, letters("[p] [] "))) == "g1 g2");
  auto none = pair_system("empty");
  CHECK(show(none, lambda_compose(none, letters("p"))) == "empty");
  auto ex = is_ex();
  CHECK_THROWS_AS(lambda_compose(ex, letters("p")), ModelError);
  CHECK_THROWS_AS(lambda_compose(sys, letters("q")), UnknownSymbolError);
}

TEST_CASE("to point-based") {
  auto sys = is_ex();
  auto t = to_point_based(sys, parse_plus("p"));
  CHECK(t.system.description().variables == std::vector<std::string>{"v_g1", "v_g2", "v_g3"});
  CHECK(t.formula == parse_re("{v_g1;(v_g1+v_g2)*;v_g3}"));
  for (std::size_t v = 0; v < t.system.num_variables(); ++v)
    CHECK(language_shape(t.system.dfa(v)) == LanguageShape::PointBased);
  CHECK(to_point_based(sys, parse_plus("pi")).formula == parse_plus("pi"));
  CHECK_THROWS_AS(to_point_based(sys, parse_re("{p}")), FragmentError);

  auto f = parse_plus("K{0} p");
  auto k = to_point_based(sys, f);
  CHECK(k.formula.kind() == Formula::Kind::Know);
  for (const auto& I : all_intervals(sys, 4))
    CHECK(oracle_check(sys, I, f, 4) == oracle_check(k.system, I, k.formula, 4));

  CHECK(sanitize_name("(l0,l1)") == "l0_l1");
}

TEST_CASE("to regular labelling") {
  auto sys = pair_system("g1");
  auto t = to_regular_labelling(sys, parse_re("{p;T*} & <A>{p;T*}"));
  CHECK(t.system.num_variables() == 2);
  CHECK(t.formula.child(0) == t.formula.child(1).child());
  CHECK(to_regular_labelling(sys, parse_re("pi")).formula == parse_plus("pi"));
  CHECK(to_regular_labelling(sys, parse_re("pi")).system.num_variables() == 1);
  CHECK_THROWS_AS(to_regular_labelling(is_ex(), parse_re("pi")), ModelError);

  auto sep = parse_re("p & [A]({(p;T)*} -> [N]{p;T*})");
  for (bool periodic : {true, false}) {
    auto two = two_config(periodic);
    auto r = to_regular_labelling(two, sep);
    CHECK(r.system.num_variables() == 1 + 3);
    CHECK(!uses_regex_atoms(r.formula));
    for (const auto& I : all_intervals(two, 3))
      CHECK(oracle_check(two, I, sep, 6) == oracle_check(r.system, I, r.formula, 6));
  }
}

TEST_CASE("random round trips") {
  std::mt19937 rng(7);
  std::vector<Modality> mods{Modality::A, Modality::Bbar, Modality::L, Modality::N,
                             Modality::B, Modality::D, Modality::E};
  for (int round = 0; round < 40; ++round) {
    auto sys = load_isrl(random_system(rng, 2, 2, 1, false, round % 2 == 0));
    std::vector<Modality> fragment(mods.begin() + (round % 3 == 0 ? 4 : 0), mods.begin() + (round % 3 == 0 ? 7 : 4));
    auto f = random_formula_over(rng, 5, fragment, [](std::mt19937&) { return Formula::var("p0"); });
    auto t = to_point_based(sys, f);
    std::size_t label_size = 0;
    for (std::size_t v = 0; v < sys.num_variables(); ++v) label_size += sys.label(v).size();
    CHECK(t.formula.size() <= f.size() + label_size * sys.num_configs());
    for (const auto& I : all_intervals(sys, 2))
      REQUIRE(oracle_check(sys, I, f, 4) == oracle_check(t.system, I, t.formula, 4));
    if (round % 2 == 0) {
      auto g = random_formula_over(rng, 5, fragment, [](std::mt19937& r) {
        return Formula::atom(random_letter_regex(r, {"p0"}, 2));
      });
      auto u = to_regular_labelling(sys, g);
      for (const auto& I : all_intervals(sys, 2))
        REQUIRE(oracle_check(sys, I, g, 4) == oracle_check(u.system, I, u.formula, 4));
    }
  }
}
