#include "kgagent/quad.hpp"

#include "kgagent/errors.hpp"

namespace kgagent {

void validate_quad(const Quad& q) {
  validate_term(q.s);
  validate_term(q.p);
  validate_term(q.o);
  validate_term(q.g);
  if (!is_iri(q.s)) throw MalformedTermError("quad subject must be an IRI: " + to_string(q.s));
  if (!is_iri(q.p)) throw MalformedTermError("quad predicate must be an IRI: " + to_string(q.p));
  if (is_variable(q.o)) throw MalformedTermError("quad object must be ground: " + to_string(q.o));
  if (!is_iri(q.g)) throw MalformedTermError("quad graph must be an IRI: " + to_string(q.g));
}

bool quad_less(const Quad& a, const Quad& b) {
  if (auto c = a.g <=> b.g; c != 0) return c < 0;
  if (auto c = a.s <=> b.s; c != 0) return c < 0;
  if (auto c = a.p <=> b.p; c != 0) return c < 0;
  return a.o < b.o;
}

std::string to_string(const Quad& q) {
  return to_string(q.s) + ' ' + to_string(q.p) + ' ' + to_string(q.o) + " @ " + to_string(q.g);
}

}  // namespace kgagent
