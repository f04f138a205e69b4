#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ehs/mc_abln.hpp"
#include "ehs/oracle.hpp"
#include "gen.hpp"
#include "support.hpp"

using namespace ehs;
using namespace ehs::testing;

namespace {

const char* kLoop = R"(
agent env
  states s
  init s
  actions t
  protocol s: t
  trans s (t) s
config g = (s)
label p = g g
)";

}  // namespace

TEST_CASE("worked verdicts") {
  auto sys = is_ex();
  auto g1 = iv(sys, {"g1"});
  auto v = check_abln(sys, g1, parse_plus("<A> p"), {BoundMode::user(3)});
  CHECK(v.holds);
  CHECK(v.conclusive);
  CHECK(v.regime() == "Conclusive");
  CHECK(v.stats.max_witness_extent == 3);

  for (auto mode : {BoundMode::paper(), BoundMode::user(1), BoundMode::tight()}) {
    auto w = check_abln(sys, g1, parse_plus("K{0} pi & !<A> p"), {mode});
    CHECK(!w.holds);
    CHECK(w.conclusive);
  }
  CHECK(check_abln(sys, g1, parse_plus("K{0} pi")).holds);

  auto loop = load_isrl(kLoop);
  auto r = check_abln(loop, Interval{0}, parse_plus("<A> p"));
  CHECK(r.holds);
  CHECK(r.conclusive);
  CHECK(fis_bound(loop, parse_plus("p")).to_u64() == 2u * 1u * (1u << loop.dfa(0).num_states()));
  CHECK(oracle_check(loop, Interval{0}, parse_plus("<A> p"), 1 + *fis_bound(loop, parse_plus("p")).to_u64()));
}

TEST_CASE("bounded searches are labelled") {
  auto sys = is_ex();
  auto g1 = iv(sys, {"g1"});
  auto f = parse_plus("<A>(!pi & <A> p)");
  // A witness found under a small bound is still a witness.
  auto v = check_abln(sys, g1, f, {BoundMode::user(2)});
  CHECK(v.holds);
  CHECK(v.conclusive);
  // An empty bounded search is not conclusive.
  auto none = check_abln(sys, g1, parse_plus("<A>(!pi & <A>(p & pi))"), {BoundMode::user(2)});
  CHECK(!none.holds);
  CHECK(none.regime() == "BoundedAt(2)");
  CHECK_THROWS_AS(check_abln(sys, g1, f), BoundInfeasible);
  CHECK_THROWS_AS(check_abln(sys, g1, f, {BoundMode::user(40), 1000}), BoundInfeasible);
  CHECK_THROWS_AS(BoundMode::user(0), Error);
}

TEST_CASE("errors") {
  auto sys = is_ex();
  auto g1 = iv(sys, {"g1"});
  CHECK_THROWS_AS(check_abln(sys, g1, parse_plus("<B> p")), FragmentError);
  CHECK_THROWS_AS(check_abln(sys, g1, parse_plus("<Abar> p")), FragmentError);
  CHECK_THROWS_AS(check_abln(sys, g1, parse_re("{p}")), FragmentError);
  CHECK_THROWS_AS(check_abln(sys, Interval{0, 2}, parse_plus("p")), IntervalError);
  CHECK_THROWS_AS(regular_witness_search(sys, StartConstraint::starts_at({0}), parse_plus("<A> p")), FragmentError);
}

TEST_CASE("witness search") {
  auto sys = is_ex();
  auto p = parse_plus("p");
  auto w = regular_witness_search(sys, StartConstraint::starts_at({*sys.find_config("g1")}), p);
  REQUIRE(w);
  CHECK(*w == iv(sys, {"g1", "g2", "g3"}));
  CHECK(!regular_witness_search(sys, StartConstraint::starts_at({*sys.find_config("g2")}), p));
  auto pt = regular_witness_search(sys, StartConstraint::starts_at({*sys.find_config("g3")}), parse_plus("pi"));
  REQUIRE(pt);
  CHECK(*pt == iv(sys, {"g3"}));
  auto ext = regular_witness_search(sys, StartConstraint::extends(iv(sys, {"g1", "g2"})), p);
  REQUIRE(ext);
  CHECK(*ext == iv(sys, {"g1", "g2", "g3"}));
  CHECK(!regular_witness_search(sys, StartConstraint::extends(iv(sys, {"g1", "g2", "g3"})), p));

  // Agrees with enumeration to the product size on every start.
  std::size_t limit = product_size(sys);
  CHECK(limit <= sys.num_configs() * 4 * 2);
  for (ConfigId g : sys.reachable_configs())
    for (const char* text : {"p", "!p & !pi", "p | pi", "!p & <A>true"}) {
      auto f = parse_plus(text);
      if (!f.modal_free()) continue;
      bool brute = false;
      for_each_path(sys, {}, {g}, limit, [&](const Interval& J) {
        brute = oracle_check(sys, J, f, J.size());
        return !brute;
      });
      CHECK(regular_witness_search(sys, StartConstraint::starts_at({g}), f).has_value() == brute);
    }
}

TEST_CASE("agrees with the oracle on depth-one formulas") {
  auto sys = is_ex();
  Grammar g{{parse_plus("p"), parse_plus("pi")},
            {negation(), know("0"), know("1"), dia(Modality::A), dia(Modality::Bbar), dia(Modality::N),
             dia(Modality::L)}};
  auto limit = product_size(sys);
  for (const auto& f : formulas_up_to(g, 4)) {
    if (f.modal_depth() > 1) continue;
    for (const auto& I : all_intervals(sys, 3)) {
      auto v = check_abln(sys, I, f);
      CHECK(v.conclusive);
      REQUIRE_MESSAGE(v.holds == oracle_check(sys, I, f, I.size() + limit), to_string(f));
    }
  }
}

TEST_CASE("user bounds are monotone for positive formulas") {
  auto sys = is_ex();
  auto f = parse_plus("<A>(!pi & <A>(!pi & <N> p))");
  for (const auto& I : all_intervals(sys, 2)) {
    bool before = false;
    for (std::uint64_t k = 1; k <= 6; ++k) {
      bool now = check_abln(sys, I, f, {BoundMode::user(k)}).holds;
      CHECK((!before || now));
      before = now;
    }
  }
}

TEST_CASE("modal context tree") {
  auto sys = is_ex();
  auto g1 = iv(sys, {"g1"});
  auto f = parse_plus("K{0} pi & !<A> p");
  auto t = compute_mct(sys, g1, f, 5);
  CHECK(t.first == *sys.find_config("g1"));
  CHECK(t.last == t.first);
  CHECK(t.point);
  CHECK(t.states == std::vector<std::uint32_t>{sys.dfa(0).step(sys.dfa(0).initial(), t.first)});
  REQUIRE(t.children.size() == 2);
  const auto& k = t.children.at("K{0} pi");
  CHECK(k.size() == 3);
  for (const auto& c : k) CHECK(c.point);
  const auto& a = t.children.at("<A> p");
  bool accepting_child = false;
  for (const auto& c : a)
    if (c.last == *sys.find_config("g3") && !c.point && sys.dfa(0).accepting(c.states[0])) accepting_child = true;
  CHECK(accepting_child);
  CHECK(a.size() == 6);
  CHECK(compute_mct(sys, g1, f, 6).children.at("<A> p").size() == 7);

  CHECK(compute_mct(sys, g1, parse_plus("p & pi"), 5).num_nodes() == 1);
  CHECK(compute_mct(sys, iv(sys, {"g1", "g2"}), f, 3) == compute_mct(sys, iv(sys, {"g1", "g2"}), f, 3));
  auto dot = to_dot(sys, t);
  CHECK(dot.find("g1, g3, ⊥") != std::string::npos);
  CHECK_THROWS_AS(compute_mct(sys, g1, parse_plus("<D> p"), 3), FragmentError);
}
