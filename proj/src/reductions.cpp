#include "ehs/reductions.hpp"

#include <cstdio>
#include <map>
#include <set>

#include "ehs/error.hpp"

namespace ehs {

std::string sanitize_name(std::string_view name) {
  std::string out;
  bool gap = false;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (gap && !out.empty()) out += '_';
      out += c;
      gap = false;
    } else {
      gap = true;
    }
  }
  return out.empty() ? "g" : out;
}

std::string atom_variable(const LetterRegex& r) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_string(r)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("q_") + buf;
}

namespace {

bool holds_at(const InterpretedSystem& sys, std::size_t v, ConfigId g) {
  const Symbol w[] = {g};
  return sys.dfa(v).accepts(w);
}

void require_point_based(const InterpretedSystem& sys, std::size_t v) {
  if (language_shape(sys.dfa(v)) != LanguageShape::PointBased)
    throw ModelError("the labelling of '" + sys.variable(v) + "' is not point-based");
}

std::size_t variable_index(const InterpretedSystem& sys, const std::string& name) {
  auto v = sys.find_variable(name);
  if (!v) throw UnknownSymbolError(name, 0);
  return *v;
}

}  // namespace

RegexExpr lambda_compose(const InterpretedSystem& sys, const LetterRegex& r) {
  // Checked up front so that an unused branch cannot hide a bad variable.
  std::set<std::size_t> used;
  bool exact_sets = false;
  auto collect = [&](auto&& self, const LetterRegex& x) -> void {
    using K = LetterRegex::Kind;
    if (x.kind() == K::Leaf) {
      const Letter& l = x.leaf_value();
      if (l.kind == Letter::Kind::Set) exact_sets = true;
      for (const auto& v : l.vars) used.insert(variable_index(sys, v));
    } else if (x.kind() == K::Concat || x.kind() == K::Union) {
      self(self, x.left());
      self(self, x.right());
    } else if (x.kind() == K::Star) {
      self(self, x.inner());
    }
  };
  collect(collect, r);
  if (exact_sets)
    for (std::size_t v = 0; v < sys.num_variables(); ++v) used.insert(v);
  for (auto v : used) require_point_based(sys, v);

  return r.substitute<RegexExpr>([&](const Letter& l) {
    std::vector<RegexExpr> terms;
    for (ConfigId g = 0; g < sys.num_configs(); ++g) {
      bool in = false;
      switch (l.kind) {
        case Letter::Kind::Top: in = true; break;
        case Letter::Kind::Pos: in = holds_at(sys, variable_index(sys, l.vars[0]), g); break;
        case Letter::Kind::Neg: in = !holds_at(sys, variable_index(sys, l.vars[0]), g); break;
        case Letter::Kind::Set: {
          in = true;
          for (std::size_t v = 0; v < sys.num_variables() && in; ++v) {
            bool listed = std::find(l.vars.begin(), l.vars.end(), sys.variable(v)) != l.vars.end();
            in = holds_at(sys, v, g) == listed;
          }
          break;
        }
      }
      if (in) terms.push_back(RegexExpr::leaf(g));
    }
    return RegexExpr::sum(std::move(terms));
  });
}

Translation to_point_based(const InterpretedSystem& sys, const Formula& f) {
  if (uses_regex_atoms(f)) throw FragmentError("the formula already has regex atoms");
  SystemDescription d = sys.description();
  d.variables.clear();
  d.labelling.clear();
  std::vector<std::string> name_of(sys.num_configs());
  std::set<std::string> taken;
  for (ConfigId g : sys.reachable_configs()) {
    std::string base = "v_" + sanitize_name(sys.config_name(g));
    std::string name = base;
    for (int i = 2; taken.contains(name); ++i) name = base + "_" + std::to_string(i);
    taken.insert(name);
    name_of[g] = name;
    d.variables.push_back(name);
    d.labelling.push_back(RegexExpr::leaf(g));
  }
  Formula out = map_atoms(f, [&](const Formula& leaf) {
    auto v = sys.find_variable(leaf.name());
    if (!v) throw ModelError("unknown variable '" + leaf.name() + "'");
    LetterRegex r = sys.label(*v).substitute<LetterRegex>([&](const Symbol& g) {
      return name_of[g].empty() ? LetterRegex::empty() : LetterRegex::leaf(Letter::pos(name_of[g]));
    });
    return Formula::atom(std::move(r));
  });
  return {InterpretedSystem(std::move(d)), std::move(out)};
}

Translation to_regular_labelling(const InterpretedSystem& sys, const Formula& f) {
  for (std::size_t v = 0; v < sys.num_variables(); ++v) require_point_based(sys, v);
  SystemDescription d = sys.description();
  std::map<std::string, std::string> var_of;  // atom text -> variable
  Formula out = map_atoms(f, [&](const Formula& leaf) {
    if (leaf.kind() == Formula::Kind::Var) return leaf;
    std::string key = to_string(leaf.regex());
    auto it = var_of.find(key);
    if (it == var_of.end()) {
      std::string name = atom_variable(leaf.regex());
      if (sys.find_variable(name)) throw ModelError("variable '" + name + "' already exists");
      d.variables.push_back(name);
      d.labelling.push_back(lambda_compose(sys, leaf.regex()));
      it = var_of.emplace(key, name).first;
    }
    return Formula::var(it->second);
  });
  return {InterpretedSystem(std::move(d)), std::move(out)};
}

}  // namespace ehs
