#pragma once

// Shared fixtures and brute-force helpers for the test suites.

#include <functional>
#include <string>
#include <vector>

#include "ehs/isrl.hpp"
#include "ehs/relations.hpp"

#ifndef EHS_TEST_DATA
#define EHS_TEST_DATA "tests/data"
#endif

namespace ehs::testing {

inline InterpretedSystem is_ex() { return load_isrl_file(std::string(EHS_TEST_DATA) + "/is_ex.isrl"); }

inline Interval iv(const InterpretedSystem& sys, std::initializer_list<const char*> names) {
  std::vector<ConfigId> c;
  for (const char* n : names) c.push_back(*sys.find_config(n));
  return Interval(std::move(c));
}

// Every t^G path of length 1..max_len from any reachable configuration, by
// naive recursion (independent of the layered enumerator).
inline std::vector<Interval> all_intervals(const InterpretedSystem& sys, std::size_t max_len) {
  std::vector<Interval> out;
  std::vector<ConfigId> path;
  std::function<void()> go = [&] {
    out.emplace_back(path);
    if (path.size() == max_len) return;
    for (ConfigId h = 0; h < sys.num_configs(); ++h)
      if (sys.step(path.back(), h)) {
        path.push_back(h);
        go();
        path.pop_back();
      }
  };
  for (ConfigId g = 0; g < sys.num_configs(); ++g)
    if (sys.reachable(g)) {
      path = {g};
      go();
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Two configurations ga (labelled p) and gb. With `periodic` the system
// alternates ga gb ga gb ...; otherwise gb may also stay put or return.
inline InterpretedSystem two_config(bool periodic) {
  std::string s = R"(
agent env
  states e
  init e
  actions go
  protocol e: go
  trans e (go,*) e
agent one
  states a b
  init a
  actions x y
  protocol a: x
)";
  s += periodic ? "  protocol b: x\n" : "  protocol b: x y\n";
  s += "  trans a (*,x) b\n  trans b (*,x) a\n";
  if (!periodic) s += "  trans b (*,y) b\n";
  s += "config ga = (e,a)\nconfig gb = (e,b)\nlabel p = ga\n";
  return load_isrl(s);
}

// All words of length <= n over k symbols.
inline std::vector<std::vector<Symbol>> all_words(std::size_t k, std::size_t n) {
  std::vector<std::vector<Symbol>> out{{}};
  std::vector<std::vector<Symbol>> layer{{}};
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<std::vector<Symbol>> next;
    for (const auto& w : layer)
      for (Symbol a = 0; a < k; ++a) {
        auto x = w;
        x.push_back(a);
        next.push_back(std::move(x));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace ehs::testing
