#include "ehs/relations.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ehs {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::A: return "A";
    case Relation::B: return "B";
    case Relation::Bbar: return "Bbar";
    case Relation::D: return "D";
    case Relation::E: return "E";
    case Relation::N: return "N";
  }
  return "?";
}

bool is_unbounded(Relation r) { return r == Relation::A || r == Relation::Bbar || r == Relation::N; }

bool for_each_path(const InterpretedSystem& sys, const std::vector<ConfigId>& prefix,
                   const std::vector<ConfigId>& starts, std::size_t max_len, const IntervalVisitor& visit) {
  // Layered extension over a parent-pointer forest; each layer is in
  // lexicographic order because its parent layer is and successors ascend.
  struct Node {
    ConfigId config;
    std::size_t parent;
  };
  constexpr std::size_t kRoot = static_cast<std::size_t>(-1);
  std::vector<Node> nodes;
  std::vector<std::size_t> layer;
  for (ConfigId s : starts) {
    nodes.push_back({s, kRoot});
    layer.push_back(nodes.size() - 1);
  }
  std::vector<ConfigId> buf;
  for (std::size_t len = 1; len <= max_len && !layer.empty(); ++len) {
    for (std::size_t id : layer) {
      buf.assign(len, 0);
      std::size_t k = len;
      for (std::size_t cur = id; cur != kRoot; cur = nodes[cur].parent) buf[--k] = nodes[cur].config;
      std::vector<ConfigId> full;
      full.reserve(prefix.size() + len);
      full.insert(full.end(), prefix.begin(), prefix.end());
      full.insert(full.end(), buf.begin(), buf.end());
      if (!visit(Interval(std::move(full)))) return false;
    }
    if (len == max_len) break;
    std::vector<std::size_t> next;
    for (std::size_t id : layer)
      for (ConfigId h : sys.successors(nodes[id].config)) {
        nodes.push_back({h, id});
        next.push_back(nodes.size() - 1);
      }
    layer = std::move(next);
  }
  return true;
}

namespace {

bool visit_sorted(std::vector<Interval> out, const IntervalVisitor& visit) {
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (const auto& J : out)
    if (!visit(J)) return false;
  return true;
}

}  // namespace

bool for_each_allen_successor(const InterpretedSystem& sys, const Interval& I, Relation r,
                              std::optional<std::size_t> max_len, const IntervalVisitor& visit) {
  if (is_unbounded(r) && !max_len)
    throw Error("relation " + std::string(to_string(r)) + " needs a maximum successor length");
  const std::size_t n = I.size();
  switch (r) {
    case Relation::A: return for_each_path(sys, {}, {I.last()}, *max_len, visit);
    case Relation::N: return for_each_path(sys, {}, sys.successors(I.last()), *max_len, visit);
    case Relation::Bbar:
      if (*max_len <= n) return true;
      return for_each_path(sys, I.configs(), sys.successors(I.last()), *max_len - n, visit);
    case Relation::B: {
      std::vector<Interval> out;
      for (std::size_t len = 1; len < n; ++len) out.push_back(I.slice(0, len));
      return visit_sorted(std::move(out), visit);
    }
    case Relation::E: {
      std::vector<Interval> out;
      for (std::size_t len = 1; len < n; ++len) out.push_back(I.slice(n - len, len));
      return visit_sorted(std::move(out), visit);
    }
    case Relation::D: {
      std::vector<Interval> out;
      for (std::size_t from = 1; from + 1 < n; ++from)
        for (std::size_t len = 1; from + len < n; ++len) out.push_back(I.slice(from, len));
      return visit_sorted(std::move(out), visit);
    }
  }
  return true;
}

std::vector<Interval> allen_successors(const InterpretedSystem& sys, const Interval& I, Relation r,
                                       std::optional<std::size_t> max_len) {
  std::vector<Interval> out;
  for_each_allen_successor(sys, I, r, max_len, [&](const Interval& J) {
    out.push_back(J);
    return true;
  });
  return out;
}

std::vector<ConfigId> strictly_reachable_from(const InterpretedSystem& sys, ConfigId g) {
  std::vector<bool> seen(sys.num_configs(), false);
  std::deque<ConfigId> queue;
  for (ConfigId h : sys.successors(g))
    if (!seen[h]) {
      seen[h] = true;
      queue.push_back(h);
    }
  while (!queue.empty()) {
    ConfigId c = queue.front();
    queue.pop_front();
    for (ConfigId h : sys.successors(c))
      if (!seen[h]) {
        seen[h] = true;
        queue.push_back(h);
      }
  }
  std::vector<ConfigId> out;
  for (ConfigId c = 0; c < sys.num_configs(); ++c)
    if (seen[c]) out.push_back(c);
  return out;
}

bool for_each_later_successor(const InterpretedSystem& sys, const Interval& I, std::size_t max_len,
                              const IntervalVisitor& visit) {
  return for_each_path(sys, {}, strictly_reachable_from(sys, I.last()), max_len, visit);
}

std::vector<Interval> later_successors(const InterpretedSystem& sys, const Interval& I, std::size_t max_len) {
  std::vector<Interval> out;
  for_each_later_successor(sys, I, max_len, [&](const Interval& J) {
    out.push_back(J);
    return true;
  });
  return out;
}

bool epi_equiv(const InterpretedSystem& sys, const Interval& I, const Interval& J, std::size_t agent) {
  if (I.size() != J.size()) return false;
  for (std::size_t j = 0; j < I.size(); ++j)
    if (sys.local(I[j], agent) != sys.local(J[j], agent)) return false;
  return true;
}

std::vector<Interval> epi_class(const InterpretedSystem& sys, const Interval& I, std::size_t agent) {
  if (agent >= sys.num_agents()) throw Error("agent index " + std::to_string(agent) + " out of range");
  const std::size_t n = I.size();
  std::vector<Interval> out;
  std::vector<ConfigId> path;
  path.reserve(n);
  // Depth-first in ascending candidate order, so `out` is lexicographic.
  std::function<void(std::size_t)> extend = [&](std::size_t j) {
    if (j == n) {
      out.emplace_back(path);
      return;
    }
    LocalId want = sys.local(I[j], agent);
    if (j == 0) {
      for (ConfigId c : sys.configs_with_local(agent, want)) {
        if (!sys.reachable(c)) continue;
        path.push_back(c);
        extend(1);
        path.pop_back();
      }
    } else {
      for (ConfigId c : sys.successors(path.back())) {
        if (sys.local(c, agent) != want) continue;
        path.push_back(c);
        extend(j + 1);
        path.pop_back();
      }
    }
  };
  extend(0);
  return out;
}

std::vector<Interval> common_class(const InterpretedSystem& sys, const Interval& I,
                                   const std::vector<std::size_t>& group) {
  if (group.empty()) throw Error("common knowledge needs a non-empty group");
  std::set<Interval> seen{I};
  std::deque<Interval> queue{I};
  while (!queue.empty()) {
    Interval cur = std::move(queue.front());
    queue.pop_front();
    for (std::size_t agent : group)
      for (auto& J : epi_class(sys, cur, agent))
        if (seen.insert(J).second) queue.push_back(std::move(J));
  }
  return {seen.begin(), seen.end()};
}

}  // namespace ehs
