#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "kgagent/quad.hpp"

namespace kgagent {

struct PredicateSpec {
  std::string iri;          // e.g. n2mu:live
  std::string domain_type;  // e.g. n2mu:person
  std::string range_type;   // e.g. n2mu:city
  bool single_valued = false;  // owl:cardinality 1 — feeds CardinalityConflict

  friend bool operator==(const PredicateSpec&, const PredicateSpec&) = default;
};

// Schema plus the closed instance list used as the encoder vocabulary.
// Entities learned mid-conversation are *not* added here — the vocabulary has
// to stay fixed for the life of a policy network; unknowns embed as UNK.
struct Ontology {
  std::vector<std::string> types;
  std::vector<PredicateSpec> predicates;
  std::vector<std::pair<std::string, std::string>> instances;  // (iri, type iri)

  const PredicateSpec* find_predicate(const std::string& iri) const;
  bool has_type(const std::string& iri) const;
  void add_instance(const std::string& inst, const std::string& type);  // dedupes

  // Schema statements for the lWorld:Ontology graph: one rdfs:Class row per
  // type, domain/range per predicate, owl:cardinality "1"^^xsd:int where
  // single-valued. Instance typing is *not* part of bootstrap.
  std::vector<Quad> bootstrap_quads() const;

  nlohmann::json to_json() const;
  static Ontology from_json(const nlohmann::json& j);

  friend bool operator==(const Ontology&, const Ontology&) = default;
};

}  // namespace kgagent
