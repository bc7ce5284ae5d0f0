#pragma once

#include <compare>

#include "kgagent/term.hpp"

namespace kgagent {

// One statement-in-context: (subject, predicate, object, graph). The graph slot
// is what makes claims addressable — a claim's own triple lives in a graph named
// after the claim, and that graph IRI then shows up as subject/object elsewhere.
struct Quad {
  Term s;
  Term p;
  Term o;
  Term g;

  friend bool operator==(const Quad&, const Quad&) = default;
};

// Subject/predicate/graph must be IRIs, object an IRI or literal; variables
// never reach storage. Throws MalformedTermError.
void validate_quad(const Quad& q);

// Canonical export order: (g, s, p, o).
bool quad_less(const Quad& a, const Quad& b);

std::string to_string(const Quad& q);

}  // namespace kgagent
