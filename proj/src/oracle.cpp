#include "ehs/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "ehs/error.hpp"

namespace ehs {

namespace {

using Path = std::vector<ConfigId>;

class Oracle {
 public:
  Oracle(const InterpretedSystem& sys, const CoreFormula& f, std::size_t bound, OracleStats* stats)
      : sys_(sys), f_(f), k_(bound), stats_(stats) {
    const std::size_t n = sys.num_configs();
    for (std::size_t v = 0; v < sys.num_variables(); ++v)
      vars_.emplace_back(sys.label(v), [](Symbol leaf, Symbol s) { return leaf == s; });
    // Point valuation for letter predicates: p holds at g iff g ∈ L(λ(p)).
    val_.assign(n, std::vector<bool>(sys.num_variables(), false));
    for (ConfigId g = 0; g < n; ++g)
      for (std::size_t v = 0; v < sys.num_variables(); ++v) {
        Symbol w[] = {g};
        val_[g][v] = vars_[v].matches(w);
      }
    for (std::size_t i = 0; i < f.num_atoms(); ++i)
      atoms_.emplace_back(f.atom(static_cast<int>(i)),
                          [this](const BoundLetter& l, Symbol g) { return letter_holds(l, g); });
  }

  // `path` is history ++ interval; the interval starts at `start`.
  bool eval(int id, const Path& path, std::size_t start) {
    const auto& n = f_.node(id);
    if (stats_) ++stats_->evaluations;
    if (!n.history) {
      Path key(path.begin() + static_cast<std::ptrdiff_t>(start), path.end());
      auto it = memo_.find({id, key});
      if (it != memo_.end()) return it->second;
      bool r = eval_raw(id, path, start);
      memo_.emplace(std::make_pair(id, std::move(key)), r);
      return r;
    }
    return eval_raw(id, path, start);
  }

 private:
  using Op = CoreFormula::Op;

  bool letter_holds(const BoundLetter& l, ConfigId g) const {
    switch (l.kind) {
      case Letter::Kind::Top: return true;
      case Letter::Kind::Pos: return val_[g][l.vars[0]];
      case Letter::Kind::Neg: return !val_[g][l.vars[0]];
      case Letter::Kind::Set:
        for (std::size_t v = 0; v < sys_.num_variables(); ++v)
          if (val_[g][v] != std::binary_search(l.vars.begin(), l.vars.end(), v)) return false;
        return true;
    }
    return false;
  }

  std::vector<ConfigId> succ(ConfigId g) const {
    std::vector<ConfigId> out;
    for (ConfigId h = 0; h < sys_.num_configs(); ++h)
      if (sys_.step(g, h)) out.push_back(h);
    return out;
  }

  // Calls visit(ext) for every path ext with 1 <= |ext| <= max_len starting
  // in `firsts`, until visit returns false.
  bool extensions(const std::vector<ConfigId>& firsts, std::size_t max_len,
                  const std::function<bool(const Path&)>& visit) {
    Path ext;
    std::function<bool()> go = [&]() -> bool {
      if (!visit(ext)) return false;
      if (ext.size() == max_len) return true;
      for (ConfigId h : succ(ext.back())) {
        ext.push_back(h);
        bool more = go();
        ext.pop_back();
        if (!more) return false;
      }
      return true;
    };
    if (max_len == 0) return true;
    for (ConfigId g : firsts) {
      ext = {g};
      if (!go()) return false;
    }
    return true;
  }

  // All histories h (paths from g_0, possibly empty) with h ++ [g] a path and
  // |h| <= k_; or just one shortest history when `all` is false.
  std::vector<Path> histories(ConfigId g, bool all) {
    if (!all) return {shortest_history(sys_, g)};
    std::vector<Path> out;
    if (g == sys_.initial_config()) out.push_back({});
    Path h{sys_.initial_config()};
    std::function<void()> go = [&] {
      if (sys_.step(h.back(), g)) out.push_back(h);
      if (h.size() == k_) return;
      for (ConfigId x : succ(h.back())) {
        h.push_back(x);
        go();
        h.pop_back();
      }
    };
    if (k_ >= 1) go();
    return out;
  }

  // Intervals of length n starting anywhere reachable, naive enumeration.
  std::vector<Path> all_paths(std::size_t n) {
    std::vector<Path> out;
    for (ConfigId g : sys_.reachable_configs()) {
      Path p{g};
      std::function<void()> go = [&] {
        if (p.size() == n) {
          out.push_back(p);
          return;
        }
        for (ConfigId h : succ(p.back())) {
          p.push_back(h);
          go();
          p.pop_back();
        }
      };
      go();
    }
    return out;
  }

  bool same_view(const Path& a, const Path& b, std::size_t agent) const {
    for (std::size_t j = 0; j < a.size(); ++j)
      if (sys_.local(a[j], agent) != sys_.local(b[j], agent)) return false;
    return true;
  }

  std::vector<Path> epistemic(const Path& I, const std::vector<std::size_t>& group, bool closure) {
    auto cands = all_paths(I.size());
    if (!closure) {
      std::vector<Path> out;
      for (auto& J : cands)
        if (same_view(I, J, group[0])) out.push_back(J);
      return out;
    }
    std::set<Path> seen{I};
    std::vector<Path> frontier{I};
    while (!frontier.empty()) {
      std::vector<Path> next;
      for (const auto& x : frontier)
        for (const auto& J : cands)
          if (!seen.count(J))
            for (std::size_t a : group)
              if (same_view(x, J, a)) {
                seen.insert(J);
                next.push_back(J);
                break;
              }
      frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
  }

  // Evaluate `child` at J with every admissible history (or one).
  bool at_any_history(int child, const Path& J, bool all, bool want_all) {
    for (auto& h : histories(J.front(), all)) {
      Path full = h;
      full.insert(full.end(), J.begin(), J.end());
      bool r = eval(child, full, h.size());
      if (want_all && !r) return false;
      if (!want_all && r) return true;
    }
    return want_all;
  }

  bool eval_raw(int id, const Path& path, std::size_t start) {
    const auto& n = f_.node(id);
    const std::size_t end = path.size();
    const std::size_t len = end - start;
    auto seg = [&](std::size_t from, std::size_t to) { return Path(path.begin() + static_cast<std::ptrdiff_t>(from), path.begin() + static_cast<std::ptrdiff_t>(to)); };
    switch (n.op) {
      case Op::True: return true;
      case Op::Pi: return len == 1;
      case Op::Var: {
        auto w = seg(start, end);
        return vars_[n.var].matches(w);
      }
      case Op::Atom: {
        auto w = seg(start, end);
        return atoms_[static_cast<std::size_t>(n.atom)].matches(w);
      }
      case Op::Not: return !eval(n.a, path, start);
      case Op::And: return eval(n.a, path, start) && eval(n.b, path, start);
      case Op::Know:
      case Op::Common: {
        bool hist = f_.node(n.a).history;
        for (const auto& J : epistemic(seg(start, end), n.agents, n.op == Op::Common)) {
          if (stats_) ++stats_->intervals;
          if (!at_any_history(n.a, J, hist, true)) return false;
        }
        return true;
      }
      case Op::Diamond: break;
    }

    // Temporal diamonds. `try_at(full, s)` evaluates the operand at the
    // interval full[s..].
    auto try_at = [&](const Path& full, std::size_t s) {
      if (stats_) ++stats_->intervals;
      return eval(n.a, full, s);
    };
    const bool hist = f_.node(n.a).history;
    switch (n.mod) {
      case Modality::A: {
        Path base = seg(0, end - 1);
        bool found = false;
        extensions({path.back()}, k_, [&](const Path& J) {
          Path full = base;
          full.insert(full.end(), J.begin(), J.end());
          found = try_at(full, base.size());
          return !found;
        });
        return found;
      }
      case Modality::N: {
        bool found = false;
        extensions(succ(path.back()), k_, [&](const Path& J) {
          Path full = path;
          full.insert(full.end(), J.begin(), J.end());
          found = try_at(full, end);
          return !found;
        });
        return found;
      }
      case Modality::Bbar: {
        if (len >= k_) return false;
        bool found = false;
        extensions(succ(path.back()), k_ - len, [&](const Path& ext) {
          Path full = path;
          full.insert(full.end(), ext.begin(), ext.end());
          found = try_at(full, start);
          return !found;
        });
        return found;
      }
      case Modality::B:
        for (std::size_t l = 1; l < len; ++l)
          if (try_at(seg(0, start + l), start)) return true;
        return false;
      case Modality::E:
        for (std::size_t l = 1; l < len; ++l)
          if (try_at(path, end - l)) return true;
        return false;
      case Modality::D:
        for (std::size_t s = start + 1; s + 1 < end; ++s)
          for (std::size_t e = s + 1; e < end; ++e)
            if (try_at(seg(0, e), s)) return true;
        return false;
      case Modality::O: {
        // J starts strictly inside I and ends strictly after it.
        bool found = false;
        for (std::size_t s = start + 1; s < end && !found; ++s) {
          std::size_t shared = end - s;
          if (shared >= k_) continue;
          extensions(succ(path.back()), k_ - shared, [&](const Path& ext) {
            Path full = path;
            full.insert(full.end(), ext.begin(), ext.end());
            found = try_at(full, s);
            return !found;
          });
        }
        return found;
      }
      case Modality::L: {
        // first(J) reachable from last(I) in >= 1 step; J's history runs
        // through I and the connecting configurations.
        bool found = false;
        if (!hist) {
          std::set<ConfigId> later;
          std::vector<ConfigId> stack = succ(path.back());
          while (!stack.empty()) {
            ConfigId g = stack.back();
            stack.pop_back();
            if (!later.insert(g).second) continue;
            for (ConfigId h : succ(g)) stack.push_back(h);
          }
          extensions({later.begin(), later.end()}, k_, [&](const Path& J) {
            found = at_any_history(n.a, J, false, false);
            if (stats_) ++stats_->intervals;
            return !found;
          });
          return found;
        }
        // mid: configurations strictly between last(I) and first(J).
        Path mid;
        std::function<bool()> go = [&]() -> bool {
          ConfigId from = mid.empty() ? path.back() : mid.back();
          extensions(succ(from), k_, [&](const Path& J) {
            Path full = path;
            full.insert(full.end(), mid.begin(), mid.end());
            std::size_t s = full.size();
            full.insert(full.end(), J.begin(), J.end());
            found = try_at(full, s);
            return !found;
          });
          if (found || mid.size() == k_) return found;
          for (ConfigId h : succ(from)) {
            mid.push_back(h);
            go();
            mid.pop_back();
            if (found) return true;
          }
          return found;
        };
        return go();
      }
      case Modality::Abar:
        // last(J) = first(I): J = path[s..start].
        for (std::size_t s = start + 1; s-- > 0;)
          if (start + 1 - s <= k_ && try_at(seg(0, start + 1), s)) return true;
        return false;
      case Modality::Ebar:
        for (std::size_t s = start; s-- > 0;)
          if (end - s <= k_ && try_at(path, s)) return true;
        return false;
      case Modality::Dbar: {
        bool found = false;
        for (std::size_t s = start; s-- > 0 && !found;) {
          std::size_t base = end - s;
          if (base >= k_) continue;
          extensions(succ(path.back()), k_ - base, [&](const Path& ext) {
            Path full = path;
            full.insert(full.end(), ext.begin(), ext.end());
            found = try_at(full, s);
            return !found;
          });
        }
        return found;
      }
      case Modality::Lbar:
        // J lies in the history: last(J) at index e < start.
        for (std::size_t e = 0; e < start; ++e)
          for (std::size_t s = 0; s <= e; ++s)
            if (e + 1 - s <= k_ && try_at(seg(0, e + 1), s)) return true;
        return false;
      case Modality::Nbar:
        if (start == 0) return false;
        for (std::size_t s = 0; s < start; ++s)
          if (start - s <= k_ && try_at(seg(0, start), s)) return true;
        return false;
      case Modality::Obar:
        // J starts before I and ends inside I, before last(I).
        for (std::size_t s = 0; s < start; ++s)
          for (std::size_t e = start; e + 1 < end; ++e)
            if (e + 1 - s <= k_ && try_at(seg(0, e + 1), s)) return true;
        return false;
    }
    return false;
  }

  const InterpretedSystem& sys_;
  const CoreFormula& f_;
  std::size_t k_;
  OracleStats* stats_;
  std::vector<DerivativeMatcher> vars_;
  std::vector<DerivativeMatcher> atoms_;
  std::vector<std::vector<bool>> val_;
  std::map<std::pair<int, Path>, bool> memo_;
};

}  // namespace

bool oracle_check(const InterpretedSystem& sys, const AnchoredInterval& a, const Formula& f, std::size_t bound,
                  OracleStats* stats) {
  validate_anchored(sys, a);
  if (a.interval.size() > bound)
    throw IntervalError("oracle bound " + std::to_string(bound) + " is below the interval length " +
                        std::to_string(a.interval.size()));
  auto core = CoreFormula::bind(f, sys);
  Oracle o(sys, core, bound, stats);
  Path full = a.history;
  full.insert(full.end(), a.interval.begin(), a.interval.end());
  return o.eval(core.root(), full, a.history.size());
}

bool oracle_check(const InterpretedSystem& sys, const Interval& I, const Formula& f, std::size_t bound,
                  OracleStats* stats) {
  validate_interval(sys, I);
  return oracle_check(sys, AnchoredInterval{shortest_history(sys, I.first()), I}, f, bound, stats);
}

}  // namespace ehs
