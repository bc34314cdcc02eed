#pragma once
// Brute-force permutation-group oracle for small degree: enumerate subgroups
// of S_n generated by two elements and test transitivity and primitivity.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using Perm = std::vector<int>;

inline Perm compose(const Perm& a, const Perm& b) {  // a after b
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[static_cast<std::size_t>(b[i])];
  return r;
}

inline std::vector<long> cycle_type(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  std::vector<long> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Perm> all_perms(int n) {
  Perm p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::set<Perm> closure(const std::vector<Perm>& gens) {
  std::set<Perm> group;
  Perm id(gens.front().size());
  std::iota(id.begin(), id.end(), 0);
  std::vector<Perm> frontier{id};
  group.insert(id);
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Perm y = compose(g, x);
        if (group.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return group;
}

inline bool transitive(const std::set<Perm>& g, int n) {
  std::set<int> orbit;
  for (const auto& p : g) orbit.insert(p[0]);
  return static_cast<int>(orbit.size()) == n;
}

// Smallest block containing 0 and x: closure of the partition generated by
// identifying g(0) ~ g(x) for all g.
inline bool primitive(const std::set<Perm>& g, int n) {
  for (int x = 1; x < n; ++x) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[static_cast<std::size_t>(a)] == a ? a : parent[static_cast<std::size_t>(a)] = find(parent[static_cast<std::size_t>(a)]); };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a == b) return false;
      parent[static_cast<std::size_t>(a)] = b;
      return true;
    };
    unite(0, x);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& p : g)
        for (int a = 0; a < n; ++a)
          if (unite(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(find(a))])) changed = true;
    }
    int root = find(0);
    bool whole = true;
    for (int a = 0; a < n; ++a)
      if (find(a) != root) whole = false;
    if (!whole) return false;
  }
  return true;
}

struct GroupSummary {
  std::set<std::vector<long>> cycle_types;
  bool is_primitive;
  std::size_t order;
};

// Transitive subgroups generated by (class representative, any element), up
// to duplicates.
inline std::vector<GroupSummary> transitive_two_generated(int n) {
  auto perms = all_perms(n);
  std::map<std::vector<long>, Perm> reps;
  for (const auto& p : perms) reps.emplace(cycle_type(p), p);
  std::set<std::set<Perm>> seen;
  std::vector<GroupSummary> out;
  for (const auto& [type, a] : reps) {
    for (const auto& b : perms) {
      auto g = closure({a, b});
      if (!transitive(g, n)) continue;
      if (!seen.insert(g).second) continue;
      GroupSummary s;
      for (const auto& p : g) s.cycle_types.insert(cycle_type(p));
      s.is_primitive = primitive(g, n);
      s.order = g.size();
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace oracle
