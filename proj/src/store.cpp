#include "kgagent/store.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "kgagent/errors.hpp"

namespace kgagent {

namespace {

TriplePattern resolve(const TriplePattern& p, const Binding& b) {
  TriplePattern r = p;
  for (Term* slot : {&r.s, &r.p, &r.o, &r.g}) {
    if (is_variable(*slot)) {
      auto it = b.find(slot->value);
      if (it != b.end()) *slot = it->second;
    }
  }
  return r;
}

bool unify_term(const Term& pat, const Term& val, Binding& b,
                std::vector<std::string>& touched) {
  if (is_variable(pat)) {
    auto [it, inserted] = b.try_emplace(pat.value, val);
    if (inserted) {
      touched.push_back(pat.value);
      return true;
    }
    return it->second == val;
  }
  return pat == val;
}

}  // namespace

std::string to_string(const Binding& b) {
  std::string out;
  for (const auto& [name, term] : b) {
    out += name;
    out += '=';
    out += to_string(term);
    out += ';';
  }
  return out;
}

std::int32_t QuadStore::intern(const Term& t) {
  auto [it, inserted] = term_ids_.try_emplace(t, static_cast<std::int32_t>(terms_.size()));
  if (inserted) {
    terms_.push_back(t);
    graph_class_.push_back(is_iri(t) ? classify_graph(t.value) : Subgraph::Claims);
  }
  return it->second;
}

std::int32_t QuadStore::lookup(const Term& t) const {
  auto it = term_ids_.find(t);
  return it == term_ids_.end() ? -1 : it->second;
}

Quad QuadStore::quad_at(const Row& r) const {
  return Quad{term(r.s), term(r.p), term(r.o), term(r.g)};
}

bool QuadStore::insert(const Quad& q) {
  validate_quad(q);
  const std::array<std::int32_t, 4> key{intern(q.s), intern(q.p), intern(q.o), intern(q.g)};
  auto [it, inserted] = by_quad_.try_emplace(key, rows_.size());
  if (!inserted) return false;
  rows_.push_back(Row{key[0], key[1], key[2], key[3], true});
  const std::size_t idx = rows_.size() - 1;
  by_g_[key[3]].push_back(idx);
  by_sp_[{key[0], key[1]}].push_back(idx);
  by_po_[{key[1], key[2]}].push_back(idx);
  ++live_count_;
  return true;
}

bool QuadStore::contains(const Quad& q) const {
  const std::int32_t s = lookup(q.s), p = lookup(q.p), o = lookup(q.o), g = lookup(q.g);
  if (s < 0 || p < 0 || o < 0 || g < 0) return false;
  return by_quad_.count({s, p, o, g}) != 0;
}

std::size_t QuadStore::erase(const Quad& q) {
  const std::int32_t s = lookup(q.s), p = lookup(q.p), o = lookup(q.o), g = lookup(q.g);
  if (s < 0 || p < 0 || o < 0 || g < 0) return 0;
  const auto it = by_quad_.find({s, p, o, g});
  if (it == by_quad_.end()) return 0;
  rows_[it->second].live = false;  // index vectors keep the id; scans skip dead rows
  by_quad_.erase(it);
  --live_count_;
  return 1;
}

std::size_t QuadStore::erase_if(const std::function<bool(const Quad&)>& pred) {
  std::size_t gone = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Row& r = rows_[i];
    if (!r.live) continue;
    if (pred(quad_at(r))) {
      r.live = false;
      by_quad_.erase({r.s, r.p, r.o, r.g});
      --live_count_;
      ++gone;
    }
  }
  return gone;
}

void QuadStore::clear() {
  terms_.clear();
  term_ids_.clear();
  rows_.clear();
  live_count_ = 0;
  by_quad_.clear();
  by_g_.clear();
  by_sp_.clear();
  by_po_.clear();
  graph_class_.clear();
}

std::vector<Quad> QuadStore::quads() const {
  std::vector<Quad> out;
  out.reserve(live_count_);
  for (const Row& r : rows_) {
    if (r.live) out.push_back(quad_at(r));
  }
  std::sort(out.begin(), out.end(), quad_less);
  return out;
}

void QuadStore::for_each(const std::function<void(const Quad&)>& fn) const {
  for (const Row& r : rows_) {
    if (r.live) fn(quad_at(r));
  }
}

std::size_t QuadStore::count_in(Subgraph sub) const {
  std::size_t n = 0;
  for (const Row& r : rows_) {
    if (r.live && graph_class_[static_cast<std::size_t>(r.g)] == sub) ++n;
  }
  return n;
}

const std::vector<std::size_t>* QuadStore::candidate_rows(const TriplePattern& r,
                                                          std::size_t* estimate) const {
  static const std::vector<std::size_t> kEmpty;
  const bool sc = !is_variable(r.s), pc = !is_variable(r.p), oc = !is_variable(r.o),
             gc = !is_variable(r.g);

  const std::vector<std::size_t>* best = nullptr;
  std::size_t best_size = live_count_;  // cost of a full scan

  const auto consider = [&](const std::vector<std::size_t>* rows) {
    if (rows->size() <= best_size) {
      best = rows;
      best_size = rows->size();
    }
  };

  if (sc && pc) {
    const std::int32_t s = lookup(r.s), p = lookup(r.p);
    if (s < 0 || p < 0) {
      *estimate = 0;
      return &kEmpty;
    }
    const auto it = by_sp_.find({s, p});
    consider(it == by_sp_.end() ? &kEmpty : &it->second);
  }
  if (pc && oc) {
    const std::int32_t p = lookup(r.p), o = lookup(r.o);
    if (p < 0 || o < 0) {
      *estimate = 0;
      return &kEmpty;
    }
    const auto it = by_po_.find({p, o});
    consider(it == by_po_.end() ? &kEmpty : &it->second);
  }
  if (gc) {
    const std::int32_t g = lookup(r.g);
    if (g < 0) {
      *estimate = 0;
      return &kEmpty;
    }
    const auto it = by_g_.find(g);
    consider(it == by_g_.end() ? &kEmpty : &it->second);
  }

  *estimate = best_size;
  return best;  // nullptr -> full scan
}

void QuadStore::join(const PatternQuery& query, std::vector<bool>& used, Binding& current,
                     std::vector<Binding>& out) const {
  int pick = -1;
  std::size_t pick_estimate = std::numeric_limits<std::size_t>::max();
  const std::vector<std::size_t>* pick_rows = nullptr;
  for (std::size_t i = 0; i < query.size(); ++i) {
    if (used[i]) continue;
    std::size_t estimate = 0;
    const auto* rows = candidate_rows(resolve(query[i], current), &estimate);
    if (estimate < pick_estimate) {
      pick = static_cast<int>(i);
      pick_estimate = estimate;
      pick_rows = rows;
    }
  }
  if (pick < 0) {
    out.push_back(current);
    return;
  }

  used[static_cast<std::size_t>(pick)] = true;
  const TriplePattern& pat = query[static_cast<std::size_t>(pick)];

  const auto try_row = [&](const Row& row) {
    if (!row.live) return;
    if (pat.where != Subgraph::Any &&
        graph_class_[static_cast<std::size_t>(row.g)] != pat.where) {
      return;
    }
    std::vector<std::string> touched;
    const bool ok = unify_term(pat.s, term(row.s), current, touched) &&
                    unify_term(pat.p, term(row.p), current, touched) &&
                    unify_term(pat.o, term(row.o), current, touched) &&
                    unify_term(pat.g, term(row.g), current, touched);
    if (ok) join(query, used, current, out);
    for (const auto& name : touched) current.erase(name);
  };

  if (pick_rows != nullptr) {
    for (const std::size_t idx : *pick_rows) try_row(rows_[idx]);
  } else {
    for (const Row& row : rows_) try_row(row);
  }
  used[static_cast<std::size_t>(pick)] = false;
}

std::vector<Binding> QuadStore::match(const PatternQuery& query) const {
  if (query.empty()) return {};
  for (const TriplePattern& p : query) {
    validate_term(p.s);
    validate_term(p.p);
    validate_term(p.o);
    validate_term(p.g);
    if (is_literal(p.g) || is_literal(p.p) || is_literal(p.s)) {
      throw MalformedTermError("literal in a subject/predicate/graph pattern slot");
    }
  }

  std::vector<Binding> raw;
  std::vector<bool> used(query.size(), false);
  Binding current;
  join(query, used, current, raw);

  // canonical order: lexicographic over (variable name, bound term) pairs
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  return raw;
}

bool QuadStore::any_match(const PatternQuery& query) const {
  return !match(query).empty();
}

}  // namespace kgagent
