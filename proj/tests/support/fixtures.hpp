#pragma once

#include <string>

#include "kgagent/belief.hpp"
#include "kgagent/capsule.hpp"
#include "kgagent/ontology.hpp"

namespace kgagent::testsupport {

// Small world shared across suites: people, cities, countries. born-in is
// single-valued so cardinality conflicts are possible.
inline Ontology toy_ontology() {
  Ontology ont;
  ont.types = {"n2mu:person", "n2mu:city", "n2mu:country"};
  ont.predicates = {
      {"n2mu:live", "n2mu:person", "n2mu:city", false},
      {"n2mu:born-in", "n2mu:person", "n2mu:country", true},
      {"n2mu:visited", "n2mu:person", "n2mu:city", false},
  };
  ont.instances = {
      {"lWorld:diana", "n2mu:person"},   {"lWorld:karla", "n2mu:person"},
      {"lWorld:paris", "n2mu:city"},     {"lWorld:amsterdam", "n2mu:city"},
      {"lWorld:france", "n2mu:country"}, {"lWorld:peru", "n2mu:country"},
  };
  return ont;
}

inline Capsule make_capsule(const std::string& source, const std::string& subject,
                            const std::string& predicate, const std::string& object,
                            Polarity pol = Polarity::Positive,
                            Certainty cert = Certainty::Certain,
                            const std::string& timestamp = "14-01-2022") {
  Capsule c;
  c.source = source;
  c.timestamp = timestamp;
  c.subject = iri(subject);
  c.predicate = iri(predicate);
  c.object = object_term_from_text(object);
  c.polarity = pol;
  c.certainty = cert;
  return c;
}

}  // namespace kgagent::testsupport
