#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ehs/cli.hpp"
#include "ehs/isrl.hpp"
#include "support.hpp"

using namespace ehs;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kSys = std::string(EHS_TEST_DATA) + "/is_ex.isrl";

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("ehsmc_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("check verdicts and exit statuses") {
  auto r = run({"check", kSys, "K{0} pi & !<A> p"});
  CHECK(r.code == kFails);
  CHECK(has(r.out, "verdict: fails"));
  CHECK(has(r.out, "regime: Conclusive"));
  CHECK(has(r.out, "engine: abln"));

  r = run({"check", kSys, "<A> p"});
  CHECK(r.code == kHolds);
  CHECK(has(r.out, "regime: Conclusive"));

  r = run({"check", kSys, "<B> p", "--interval", "g1 g2 g1 g2 g3"});
  CHECK(r.code == kFails);
  CHECK(has(r.out, "engine: bde"));
  CHECK(run({"check", kSys, "p", "--interval", "g1 g2 g3"}).code == kHolds);

  // Bounded and infeasible searches.
  CHECK(run({"check", kSys, "<A>(!pi & <A> p)"}).code == kInconclusive);
  r = run({"check", kSys, "<A>(!pi & <A>(p & pi))", "--bound-mode", "user", "--bound", "3"});
  CHECK(r.code == kInconclusive);
  CHECK(has(r.out, "regime: BoundedAt(3)"));
  CHECK(run({"check", kSys, "<A>(!pi & <A> p)", "--bound-mode", "user", "--bound", "30", "--frontier-ceiling",
             "100"})
            .code == kInconclusive);

  // Oracle.
  r = run({"oracle", kSys, "<D> pi", "--interval", "g1 g2 g3", "--bound", "5"});
  CHECK(r.code == kHolds);
  CHECK(has(r.out, "engine: oracle"));
  CHECK(run({"check", kSys, "<Abar> true", "--engine", "oracle"}).code == kInconclusive);

  // [A] at the initial point.
  CHECK(run({"check", kSys, "!p", "--all-initial"}).code == kFails);
  CHECK(run({"check", kSys, "pi | !pi", "--all-initial"}).code == kHolds);
}

TEST_CASE("usage and parse errors") {
  auto r = run({"check", kSys, "{p;(}", "--logic", "re"});
  CHECK(r.code == kUsage);
  CHECK(has(r.err, "position"));
  CHECK(run({"check", kSys, "<A> (p"}).code == kUsage);
  CHECK(run({"check", kSys, "<Abar> p"}).code == kUsage);
  CHECK(has(run({"check", kSys, "<Abar> p"}).err, "--engine oracle"));
  CHECK(run({"check", kSys, "p", "--interval", "g1 g3"}).code == kUsage);
  CHECK(run({"check", kSys, "p", "--interval", "g9"}).code == kUsage);
  CHECK(run({"check", "/nonexistent.isrl", "p"}).code == kUsage);
  CHECK(run({"check", kSys, "q"}).code == kUsage);
  CHECK(run({"check", kSys, "p", "--engine", "fast"}).code == kUsage);
  CHECK(run({"check", kSys, "<A>p", "--bound-mode", "user"}).code == kUsage);
  CHECK(run({}).code == kUsage);
  CHECK(run({"frobnicate"}).code == kUsage);
  CHECK(run({"check", kSys, "p", "--all-initial", "--interval", "g1"}).code == kUsage);

  auto bad = temp_file("bad.isrl", "agent a\n  states s\n  init s\n  actions x\n  protocol s: x\n  trans s (x) s\n"
                                   "config g = (s)\nlabel p = g (\n");
  r = run({"check", bad, "p"});
  CHECK(r.code == kUsage);
  CHECK(has(r.err, "line 8"));
}

TEST_CASE("json reports are deterministic") {
  auto a = run({"check", kSys, "K{0} pi & !<A> p", "--json"});
  auto b = run({"check", kSys, "K{0} pi & !<A> p", "--json"});
  CHECK(a.out == b.out);
  CHECK(has(a.out, "\"regime\": \"Conclusive\""));
  CHECK(!has(a.out, "elapsed"));
  CHECK(run({"stats", kSys, "<A> p", "--json"}).out == run({"stats", kSys, "<A> p", "--json"}).out);
}

TEST_CASE("stats and classify") {
  auto r = run({"stats", kSys, "p"});
  CHECK(r.code == kHolds);
  CHECK(has(r.out, "|G|: 3"));
  CHECK(has(r.out, "DFA(p): 4 states"));
  CHECK(has(r.out, "f^IS: 288\n"));
  CHECK(has(run({"stats", kSys, "<A> p"}).out, "f^IS: 1.432e+89"));
  CHECK(has(run({"stats", kSys, "<B> p"}).out, "undefined"));
  auto novars = temp_file("novars.isrl", "agent a\n  states s t\n  init s\n  actions x\n  protocol s: x\n"
                                         "  protocol t: x\n  trans s (x) t\n  trans t (x) s\n");
  CHECK(has(run({"stats", novars, "pi & true"}).out, "f^IS: 8\n"));

  r = run({"classify", kSys, "<A> p"});
  CHECK(has(r.out, "p: general"));
  CHECK(has(r.out, "fragment: ABLN"));
}

TEST_CASE("export-dot") {
  auto r = run({"export-dot", kSys, "automaton:p"});
  CHECK(r.code == kHolds);
  for (const char* z : {"z0 [shape", "z1 [shape", "z2 [shape", "z3 [shape"}) CHECK(count(r.out, z) == 1);
  CHECK(count(r.out, "doublecircle") == 1);

  r = run({"export-dot", kSys, "tg"});
  CHECK(count(r.out, "->") == 4);
  CHECK(count(r.out, "\"g3\"") == 3);

  r = run({"export-dot", kSys, "mct:K{0} pi & !<A> p:5"});
  CHECK(r.code == kHolds);
  CHECK(count(r.out, "[label=\"K{0} pi\"]") == 3);
  CHECK(has(r.out, "g1, g3, ⊥, {p:z3}"));
  CHECK(has(r.out, "g1, g2, ⊥, {p:z1}"));
  CHECK(has(r.out, "g1, g1, ⊥, {p:z2}"));

  CHECK(run({"export-dot", kSys, "automaton:q"}).code == kUsage);
  CHECK(run({"export-dot", kSys, "pie"}).code == kUsage);
  CHECK(run({"export-dot", kSys, "mct:<A> p:x"}).code == kUsage);
}

TEST_CASE("reduce") {
  auto r = run({"reduce", kSys, "p", "--direction", "to-re"});
  CHECK(r.code == kHolds);
  CHECK(has(r.out, "label v_g1 = g1"));
  CHECK(has(r.out, "{v_g1 (v_g1+v_g2)* v_g3}"));
  CHECK(run({"reduce", kSys, "pi", "--direction", "to-plus"}).code == kUsage);

  auto sys_out = temp_file("pb.isrl", "");
  auto f_out = temp_file("pb.f", "");
  r = run({"reduce", kSys, "pi", "--direction", "to-re", "--out-system", sys_out, "--out-formula", f_out});
  CHECK(r.code == kHolds);
  CHECK(read_text_file(f_out) == "pi\n");
  r = run({"reduce", sys_out, "@" + f_out, "--direction", "to-plus"});
  CHECK(r.code == kHolds);
  CHECK(has(r.out, "# formula\npi\n"));

  // The translated pair gives the same verdict.
  auto sys2 = temp_file("pb2.isrl", "");
  auto f2 = temp_file("pb2.f", "");
  run({"reduce", kSys, "K{0} p", "--direction", "to-re", "--out-system", sys2, "--out-formula", f2});
  for (const char* iv : {"g1 g2 g3", "g1 g2", "g2 g3 g1"}) {
    auto a = run({"oracle", kSys, "K{0} p", "--interval", iv, "--bound", "4"});
    auto b = run({"oracle", sys2, "@" + f2, "--logic", "re", "--interval", iv, "--bound", "4"});
    CHECK(has(a.out, "verdict: holds") == has(b.out, "verdict: holds"));
  }
  CHECK(run({"reduce", kSys, "p", "--direction", "sideways"}).code == kUsage);
}
