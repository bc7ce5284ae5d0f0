#pragma once

// Reference matcher for differential tests: processes pattern rows strictly
// left to right, full-scans the store for every row, no indexes, no join
// reordering. Keep this file free of QuadStore internals — it may only use
// quads() and public term helpers, so that it stays an independent oracle.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "kgagent/store.hpp"

namespace kgagent::testsupport {

inline bool naive_unify(const Term& pat, const Term& val, Binding& b) {
  if (is_variable(pat)) {
    const auto it = b.find(pat.value);
    if (it == b.end()) {
      b[pat.value] = val;
      return true;
    }
    return it->second == val;
  }
  return pat == val;
}

inline void naive_step(const std::vector<Quad>& all, const PatternQuery& query,
                       std::size_t row, const Binding& current,
                       std::vector<Binding>& out) {
  if (row == query.size()) {
    out.push_back(current);
    return;
  }
  const TriplePattern& pat = query[row];
  for (const Quad& q : all) {
    if (pat.where != Subgraph::Any && classify_graph(q.g.value) != pat.where) continue;
    Binding next = current;
    if (naive_unify(pat.s, q.s, next) && naive_unify(pat.p, q.p, next) &&
        naive_unify(pat.o, q.o, next) && naive_unify(pat.g, q.g, next)) {
      naive_step(all, query, row + 1, next, out);
    }
  }
}

inline std::vector<Binding> naive_match(const QuadStore& store, const PatternQuery& query) {
  if (query.empty()) return {};
  std::vector<Binding> raw;
  naive_step(store.quads(), query, 0, Binding{}, raw);
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  return raw;
}

}  // namespace kgagent::testsupport
