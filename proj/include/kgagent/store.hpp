#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kgagent/quad.hpp"
#include "kgagent/vocab.hpp"

namespace kgagent {

// One row of a basic graph pattern. Any slot may be a variable (including
// predicate and graph); `where` additionally restricts which of the five
// subgraphs the row may match, independent of what the graph slot binds to.
struct TriplePattern {
  Term s;
  Term p;
  Term o;
  Term g;
  Subgraph where = Subgraph::Any;
};

using PatternQuery = std::vector<TriplePattern>;

// Variable name (with '?') -> bound term. std::map keeps serialization canonical.
using Binding = std::map<std::string, Term>;

std::string to_string(const Binding& b);

// In-memory quad set with term interning and three secondary indexes
// (by graph, by subject+predicate, by predicate+object). match() joins
// pattern rows most-selective-first; results are deduplicated and sorted
// so equal stores always answer equal queries identically.
class QuadStore {
 public:
  // True if the quad was new. Throws MalformedTermError on invalid terms.
  bool insert(const Quad& q);
  bool contains(const Quad& q) const;

  // Returns the number of quads removed (0 or 1).
  std::size_t erase(const Quad& q);
  // Removes every quad the predicate accepts; returns how many went.
  std::size_t erase_if(const std::function<bool(const Quad&)>& pred);

  std::size_t size() const { return live_count_; }
  bool empty() const { return live_count_ == 0; }
  void clear();

  // All quads in canonical (g, s, p, o) order.
  std::vector<Quad> quads() const;
  // Storage-order traversal, cheaper than quads() when order is irrelevant.
  void for_each(const std::function<void(const Quad&)>& fn) const;

  std::vector<Binding> match(const PatternQuery& query) const;
  bool any_match(const PatternQuery& query) const;

  std::size_t count_in(Subgraph sub) const;

 private:
  struct Row {
    std::int32_t s, p, o, g;
    bool live = true;
  };

  std::int32_t intern(const Term& t);
  const Term& term(std::int32_t id) const { return terms_[static_cast<std::size_t>(id)]; }
  Quad quad_at(const Row& r) const;

  // -1 when the term is not interned (then no stored quad can contain it).
  std::int32_t lookup(const Term& t) const;

  // Smallest candidate row list for a pattern under the current binding;
  // nullptr means "scan everything".
  const std::vector<std::size_t>* candidate_rows(const TriplePattern& resolved,
                                                 std::size_t* estimate) const;

  void join(const PatternQuery& query, std::vector<bool>& used, Binding& current,
            std::vector<Binding>& out) const;

  std::vector<Term> terms_;
  std::map<Term, std::int32_t> term_ids_;
  std::vector<Row> rows_;
  std::size_t live_count_ = 0;
  std::map<std::array<std::int32_t, 4>, std::size_t> by_quad_;  // (s,p,o,g) -> row
  std::map<std::int32_t, std::vector<std::size_t>> by_g_;
  std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::size_t>> by_sp_;
  std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::size_t>> by_po_;
  std::vector<Subgraph> graph_class_;  // indexed by term id of the graph
};

}  // namespace kgagent
