#include "ehs/mc_bde.hpp"

#include <map>

#include "ehs/error.hpp"
#include "ehs/relations.hpp"

namespace ehs {

std::string interval_to_string(const InterpretedSystem& sys, const Interval& I) {
  std::string s;
  for (ConfigId g : I) s += (s.empty() ? "" : " ") + sys.config_name(g);
  return s;
}

namespace {

Relation relation_of(Modality m) {
  switch (m) {
    case Modality::B: return Relation::B;
    case Modality::D: return Relation::D;
    case Modality::E: return Relation::E;
    default: throw FragmentError("modality <" + std::string(to_string(m)) + "> is outside the BDE fragment");
  }
}

class Bde {
 public:
  Bde(const InterpretedSystem& sys, const CoreFormula& f, const BdeOptions& o, BdeResult& r)
      : sys_(sys), f_(f), opts_(o), res_(r) {}

  bool eval(int id, const Interval& I) {
    ++res_.visited;
    res_.max_visited_length = std::max(res_.max_visited_length, I.size());
    if (opts_.memo) {
      auto key = std::make_pair(id, I);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
      bool v = eval_raw(id, I);
      memo_.emplace(std::move(key), v);
      return v;
    }
    return eval_raw(id, I);
  }

  // Why `id` evaluates to `value` at I, one line per step.
  void explain(int id, const Interval& I, bool value, int depth, std::string& out) {
    const auto& n = f_.node(id);
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    out += pad + "[" + interval_to_string(sys_, I) + "] " + (value ? "|= " : "|/= ") + f_.to_string(id) + "\n";
    if (depth > 32) return;
    using Op = CoreFormula::Op;
    switch (n.op) {
      case Op::Not: explain(n.a, I, !value, depth + 1, out); break;
      case Op::And:
        if (value) {
          explain(n.a, I, true, depth + 1, out);
          explain(n.b, I, true, depth + 1, out);
        } else {
          int bad = eval(n.a, I) ? n.b : n.a;
          explain(bad, I, false, depth + 1, out);
        }
        break;
      case Op::Know:
      case Op::Common: {
        auto cls = n.op == Op::Know ? epi_class(sys_, I, n.agents[0]) : common_class(sys_, I, n.agents);
        if (value) {
          out += pad + "  all " + std::to_string(cls.size()) + " indistinguishable intervals satisfy the operand\n";
        } else {
          for (const auto& J : cls)
            if (!eval(n.a, J)) {
              explain(n.a, J, false, depth + 1, out);
              break;
            }
        }
        break;
      }
      case Op::Diamond: {
        auto succ = allen_successors(sys_, I, relation_of(n.mod));
        if (value) {
          for (const auto& J : succ)
            if (eval(n.a, J)) {
              explain(n.a, J, true, depth + 1, out);
              break;
            }
        } else {
          out += pad + "  none of the " + std::to_string(succ.size()) + " related intervals satisfies the operand\n";
        }
        break;
      }
      default: break;
    }
  }

 private:
  bool eval_raw(int id, const Interval& I) {
    const auto& n = f_.node(id);
    using Op = CoreFormula::Op;
    switch (n.op) {
      case Op::True: return true;
      case Op::Pi: return I.is_point();
      case Op::Var: return label_holds(sys_, n.var, I);
      case Op::Atom: throw FragmentError("regex atoms must be translated to variables first");
      case Op::Not: return !eval(n.a, I);
      case Op::And: return eval(n.a, I) && eval(n.b, I);
      case Op::Know:
        for (const auto& J : epi_class(sys_, I, n.agents[0]))
          if (!eval(n.a, J)) return false;
        return true;
      case Op::Common:
        for (const auto& J : common_class(sys_, I, n.agents))
          if (!eval(n.a, J)) return false;
        return true;
      case Op::Diamond: {
        bool found = false;
        for_each_allen_successor(sys_, I, relation_of(n.mod), std::nullopt, [&](const Interval& J) {
          found = eval(n.a, J);
          return !found;
        });
        return found;
      }
    }
    return false;
  }

  const InterpretedSystem& sys_;
  const CoreFormula& f_;
  const BdeOptions& opts_;
  BdeResult& res_;
  std::map<std::pair<int, Interval>, bool> memo_;
};

}  // namespace

BdeResult check_bde_detailed(const InterpretedSystem& sys, const Interval& I, const Formula& f,
                             const BdeOptions& opts) {
  if (!in_bde(f)) throw FragmentError("formula is outside the BDE fragment: " + to_string(f));
  if (uses_regex_atoms(f)) throw FragmentError("regex atoms must be translated to variables first");
  validate_interval(sys, I);
  auto core = CoreFormula::bind(f, sys);
  BdeResult res;
  Bde engine(sys, core, opts, res);
  res.holds = engine.eval(core.root(), I);
  if (opts.trace && !res.holds) engine.explain(core.root(), I, false, 0, res.trace);
  return res;
}

bool check_bde(const InterpretedSystem& sys, const Interval& I, const Formula& f) {
  return check_bde_detailed(sys, I, f).holds;
}

}  // namespace ehs
