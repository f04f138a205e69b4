#include "ehs/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ehs/core.hpp"
#include "ehs/error.hpp"
#include "ehs/isrl.hpp"
#include "ehs/mc_abln.hpp"
#include "ehs/mc_bde.hpp"
#include "ehs/oracle.hpp"
#include "ehs/reductions.hpp"

namespace ehs {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct CheckArgs {
  std::string system;
  std::string formula;
  std::string logic = "plus";
  std::string interval;
  std::string engine = "auto";
  std::string bound_mode = "paper";
  std::uint64_t bound = 0;
  std::uint64_t ceiling = 10'000'000;
  bool all_initial = false;
  bool json = false;
};

// "@path" reads the formula from a file.
Formula load_formula(const std::string& arg, const std::string& logic) {
  std::string text = arg;
  if (!arg.empty() && arg[0] == '@') text = read_text_file(arg.substr(1));
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  if (logic == "plus") return parse_plus(text);
  if (logic == "re") return parse_re(text);
  throw UsageError("--logic must be 'plus' or 're'");
}

// Whitespace-separated configuration names; tuples may contain spaces.
Interval parse_interval(const InterpretedSystem& sys, const std::string& text) {
  if (text.empty()) return Interval{sys.initial_config()};
  std::vector<std::string> names;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (std::isspace(static_cast<unsigned char>(c)) && depth == 0) {
      if (!cur.empty()) names.push_back(std::move(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) names.push_back(cur);
  if (names.empty()) throw UsageError("--interval is empty");
  std::vector<ConfigId> configs;
  for (const auto& n : names) {
    auto g = sys.find_config(n);
    if (!g) throw IntervalError("unknown configuration '" + n + "'");
    configs.push_back(*g);
  }
  Interval I(std::move(configs));
  validate_interval(sys, I);
  return I;
}

Json interval_json(const InterpretedSystem& sys, const Interval& I) {
  Json a = Json::array();
  for (ConfigId g : I) a.push_back(sys.config_name(g));
  return a;
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
  auto sys = load_isrl_file(a.system);
  Formula f = load_formula(a.formula, a.logic);
  if (a.all_initial && !a.interval.empty()) throw UsageError("--all-initial and --interval are exclusive");
  Interval I = parse_interval(sys, a.interval);
  if (a.all_initial) f = Formula::box(Modality::A, f);

  std::string engine = a.engine;
  if (engine == "auto") {
    if (uses_regex_atoms(f))
      throw UsageError("regex atoms need '--engine oracle' or a translation with 'reduce --direction to-plus'");
    switch (fragment_of(f)) {
      case Fragment::BDE: engine = "bde"; break;
      case Fragment::ABLN: engine = "abln"; break;
      case Fragment::Full:
        throw UsageError("formula is outside the BDE and ABLN fragments; use '--engine oracle --bound N'");
    }
  }

  Json j;
  j["formula"] = to_string(f);
  j["interval"] = interval_json(sys, I);
  j["engine"] = engine;
  bool holds = false;
  bool conclusive = true;
  std::string regime = "Conclusive";
  auto t0 = std::chrono::steady_clock::now();
  if (engine == "bde") {
    auto r = check_bde_detailed(sys, I, f, {true, false});
    holds = r.holds;
    j["bound"] = "none";
    j["stats"] = {{"visited", r.visited}, {"max_visited_length", r.max_visited_length}};
  } else if (engine == "abln") {
    AblnOptions o;
    if (a.bound_mode == "paper") {
      o.mode = BoundMode::paper();
    } else if (a.bound_mode == "tight") {
      o.mode = BoundMode::tight();
    } else if (a.bound_mode == "user") {
      if (a.bound == 0) throw UsageError("--bound-mode user needs --bound N (N >= 1)");
      o.mode = BoundMode::user(a.bound);
    } else {
      throw UsageError("--bound-mode must be paper, user or tight");
    }
    o.frontier_ceiling = a.ceiling;
    auto v = check_abln(sys, I, f, o);
    holds = v.holds;
    conclusive = v.conclusive;
    regime = v.regime();
    j["bound"] = to_string(o.mode);
    j["stats"] = {{"evaluations", v.stats.evaluations},
                  {"witness_searches", v.stats.witness_searches},
                  {"enumerated", v.stats.enumerated},
                  {"largest_frontier", v.stats.largest_frontier},
                  {"max_witness_extent", v.stats.max_witness_extent}};
  } else if (engine == "oracle") {
    std::uint64_t k = a.bound ? a.bound : std::max<std::uint64_t>(I.size(), 8);
    if (k < I.size()) throw UsageError("--bound must be at least the interval length");
    OracleStats st;
    holds = oracle_check(sys, I, f, k, &st);
    // Exact only where no quantifier can leave the interval.
    conclusive = in_bde(f) && !uses_regex_atoms(f);
    if (!conclusive) regime = "BoundedAt(" + std::to_string(k) + ")";
    j["bound"] = k;
    j["stats"] = {{"evaluations", st.evaluations}, {"intervals", st.intervals}};
  } else {
    throw UsageError("--engine must be auto, bde, abln or oracle");
  }
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  j["verdict"] = holds ? "holds" : "fails";
  j["holds"] = holds;
  j["regime"] = regime;
  if (a.json) {
    out << j.dump(2) << "\n";
  } else {
    out << "verdict: " << (holds ? "holds" : "fails") << "\n";
    out << "regime: " << regime << "\n";
    out << "engine: " << engine << "\n";
    out << "bound: " << (j["bound"].is_string() ? j["bound"].get<std::string>() : j["bound"].dump()) << "\n";
    out << "interval: " << interval_to_string(sys, I) << "\n";
    out << "formula: " << to_string(f) << "\n";
    for (const auto& [k, v] : j["stats"].items()) out << k << ": " << v.dump() << "\n";
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(3);
    t << ms;
    out << "elapsed: " << t.str() << " ms\n";
  }
  if (!conclusive) return kInconclusive;
  return holds ? kHolds : kFails;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

int cmd_reduce(const std::string& system, const std::string& formula, const std::string& direction,
               const std::string& out_system, const std::string& out_formula, std::ostream& out) {
  auto sys = load_isrl_file(system);
  Translation t = [&] {
    if (direction == "to-re") return to_point_based(sys, load_formula(formula, "plus"));
    if (direction == "to-plus") return to_regular_labelling(sys, load_formula(formula, "re"));
    throw UsageError("--direction must be to-re or to-plus");
  }();
  Logic logic = direction == "to-re" ? Logic::RE : Logic::Plus;
  std::string sys_text = write_isrl(t.system.description());
  std::string f_text = to_string(t.formula);
  // The emitted texts must read back to themselves.
  if (write_isrl(parse_isrl(sys_text)) != sys_text || !(parse_formula(f_text, logic) == t.formula))
    throw Error("internal error: translated output does not round-trip");
  if (!out_system.empty())
    write_file(out_system, sys_text);
  else
    out << sys_text;
  if (!out_formula.empty())
    write_file(out_formula, f_text + "\n");
  else
    out << "# formula\n" << f_text << "\n";
  return kHolds;
}

Json stats_json(const InterpretedSystem& sys, const std::optional<Formula>& f) {
  Json j;
  j["configurations"] = sys.num_configs();
  j["reachable"] = sys.reachable_configs().size();
  Json vars = Json::array();
  for (std::size_t v = 0; v < sys.num_variables(); ++v)
    vars.push_back({{"name", sys.variable(v)},
                    {"dfa_states", sys.dfa(v).num_states()},
                    {"shape", std::string(to_string(language_shape(sys.dfa(v))))}});
  j["variables"] = vars;
  if (f) {
    j["formula"] = to_string(*f);
    j["fragment"] = std::string(to_string(fragment_of(*f)));
    if (!uses_regex_atoms(*f) && in_abln(eliminate_L(normalize(*f)))) {
      j["fis"] = fis_bound(sys, *f).to_string();
      j["fis_tight"] = fis_bound(sys, *f, true).to_string();
    } else {
      j["fis"] = nullptr;
      j["fis_tight"] = nullptr;
    }
  }
  return j;
}

int cmd_stats(const std::string& system, const std::string& formula, const std::string& logic, bool json,
              std::ostream& out) {
  auto sys = load_isrl_file(system);
  std::optional<Formula> f;
  if (!formula.empty()) f = load_formula(formula, logic);
  Json j = stats_json(sys, f);
  if (json) {
    out << j.dump(2) << "\n";
    return kHolds;
  }
  out << "|G|: " << sys.num_configs() << "\n";
  out << "reachable: " << sys.reachable_configs().size() << "\n";
  for (const auto& v : j["variables"])
    out << "DFA(" << v["name"].get<std::string>() << "): " << v["dfa_states"].get<std::size_t>() << " states, "
        << v["shape"].get<std::string>() << "\n";
  if (f) {
    out << "fragment: " << j["fragment"].get<std::string>() << "\n";
    if (j["fis"].is_null()) {
      out << "f^IS: undefined (outside ABLN)\n";
    } else {
      out << "f^IS: " << j["fis"].get<std::string>() << "\n";
      out << "f^IS (tight): " << j["fis_tight"].get<std::string>() << "\n";
    }
  }
  return kHolds;
}

int cmd_classify(const std::string& system, const std::string& formula, const std::string& logic,
                 std::ostream& out) {
  auto sys = load_isrl_file(system);
  for (std::size_t v = 0; v < sys.num_variables(); ++v)
    out << sys.variable(v) << ": " << to_string(language_shape(sys.dfa(v))) << "\n";
  if (!formula.empty()) {
    Formula f = load_formula(formula, logic);
    out << "fragment: " << to_string(fragment_of(f)) << "\n";
  }
  return kHolds;
}

int cmd_export_dot(const std::string& system, const std::string& what, const std::string& interval,
                   std::ostream& out) {
  auto sys = load_isrl_file(system);
  if (what == "tg") {
    out << tg_to_dot(sys);
    return kHolds;
  }
  if (what.starts_with("automaton:")) {
    std::string var = what.substr(10);
    auto v = sys.find_variable(var);
    if (!v) throw UsageError("unknown variable '" + var + "'");
    out << to_dot(sys.dfa(*v), var);
    return kHolds;
  }
  if (what.starts_with("mct:")) {
    auto colon = what.rfind(':');
    if (colon <= 3) throw UsageError("expected mct:FORMULA:HORIZON");
    std::size_t horizon = 0;
    try {
      horizon = std::stoul(what.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("expected mct:FORMULA:HORIZON with a numeric horizon");
    }
    if (horizon == 0) throw UsageError("the horizon must be positive");
    Formula f = parse_plus(what.substr(4, colon - 4));
    out << to_dot(sys, compute_mct(sys, parse_interval(sys, interval), f, horizon));
    return kHolds;
  }
  throw UsageError("unknown export target '" + what + "' (tg, automaton:VAR or mct:FORMULA:HORIZON)");
}

void add_check_options(CLI::App* c, CheckArgs& a, bool oracle) {
  c->add_option("system", a.system, "system file")->required();
  c->add_option("formula", a.formula, "formula text, or @file")->required();
  c->add_option("--logic", a.logic, "plus (variables) or re (regex atoms)");
  c->add_option("--interval", a.interval, "configuration names, space separated (default: initial point)");
  if (!oracle) {
    c->add_option("--engine", a.engine, "auto, bde, abln or oracle");
    c->add_option("--bound-mode", a.bound_mode, "paper, user or tight (abln)");
  }
  c->add_option("--bound", a.bound, "user bound (abln) or oracle bound");
  c->add_option("--frontier-ceiling", a.ceiling, "largest bounded search allowed (abln)");
  c->add_flag("--all-initial", a.all_initial, "check [A]f at the initial point");
  c->add_flag("--json", a.json, "machine-readable report");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checker for epistemic interval logic over interpreted systems", "ehsmc"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "decide a formula at an interval");
  add_check_options(check, check_args, false);

  CheckArgs oracle_args;
  oracle_args.engine = "oracle";
  auto* oracle = app.add_subcommand("oracle", "check with the bounded brute-force evaluator");
  add_check_options(oracle, oracle_args, true);

  std::string r_sys, r_formula, r_dir, r_out_sys, r_out_formula;
  auto* reduce = app.add_subcommand("reduce", "translate between variables and regex atoms");
  reduce->add_option("system", r_sys, "system file")->required();
  reduce->add_option("formula", r_formula, "formula text, or @file")->required();
  reduce->add_option("--direction", r_dir, "to-re (point-based, regex atoms) or to-plus")->required();
  reduce->add_option("--out-system", r_out_sys, "write the system here");
  reduce->add_option("--out-formula", r_out_formula, "write the formula here");

  std::string s_sys, s_formula, s_logic = "plus";
  bool s_json = false;
  auto* stats = app.add_subcommand("stats", "sizes, fragment and f^IS bounds");
  stats->add_option("system", s_sys, "system file")->required();
  stats->add_option("formula", s_formula, "formula text, or @file");
  stats->add_option("--logic", s_logic, "plus or re");
  stats->add_flag("--json", s_json, "machine-readable report");

  std::string c_sys, c_formula, c_logic = "plus";
  auto* classify = app.add_subcommand("classify", "labelling shapes and formula fragment");
  classify->add_option("system", c_sys, "system file")->required();
  classify->add_option("formula", c_formula, "formula text, or @file");
  classify->add_option("--logic", c_logic, "plus or re");

  std::string d_sys, d_what, d_interval;
  auto* dot = app.add_subcommand("export-dot", "DOT rendering of t^G, a labelling DFA or a context tree");
  dot->add_option("system", d_sys, "system file")->required();
  dot->add_option("what", d_what, "tg | automaton:VAR | mct:FORMULA:HORIZON")->required();
  dot->add_option("--interval", d_interval, "root interval for mct (default: initial point)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kHolds : kUsage;
  }

  try {
    if (*check) return cmd_check(check_args, out);
    if (*oracle) return cmd_check(oracle_args, out);
    if (*reduce) return cmd_reduce(r_sys, r_formula, r_dir, r_out_sys, r_out_formula, out);
    if (*stats) return cmd_stats(s_sys, s_formula, s_logic, s_json, out);
    if (*classify) return cmd_classify(c_sys, c_formula, c_logic, out);
    if (*dot) return cmd_export_dot(d_sys, d_what, d_interval, out);
  } catch (const BoundInfeasible& e) {
    err << "bound infeasible: " << e.what() << "\n";
    return kInconclusive;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const FragmentError& e) {
    err << "fragment error: " << e.what() << "\n";
    return kUsage;
  } catch (const IntervalError& e) {
    err << "interval error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace ehs
