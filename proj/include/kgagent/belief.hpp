#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kgagent/capsule.hpp"
#include "kgagent/ontology.hpp"
#include "kgagent/store.hpp"

namespace kgagent {

// One turn's worth of knowledge in graph form: the claim in its named graph
// plus the Turn/Mention/Attribution provenance scaffold around it.
struct InteractionGraph {
  std::vector<Quad> quads;
  std::string claim_iri;
  std::string turn_iri;
  std::string mention_iri;
  std::string attribution_iri;
  Term subject, predicate, object;
  std::string source;
  Polarity polarity = Polarity::Positive;
  Certainty certainty = Certainty::Certain;
  std::optional<Sentiment> sentiment;
};

// Fixed 11-quad shape (12 with sentiment): claim triple, Turn (type/actor/time),
// Mention (type/denotes/derived-from/has-attribution), Attribution (type +
// polarity + certainty values). Throws MalformedCapsuleError.
InteractionGraph build_interaction_graph(const Capsule& c, const std::string& chat_id,
                                         int turn_no);

// The agent's long-lived belief network: a QuadStore read through the
// five-subgraph lens, always holding at least the ontology bootstrap.
class BeliefGraph {
 public:
  BeliefGraph() = default;
  explicit BeliefGraph(Ontology ontology);

  const Ontology& ontology() const { return ontology_; }
  const QuadStore& store() const { return store_; }
  QuadStore& store() { return store_; }

  // Back to bootstrap-only.
  void reset();
  // Replace all statements, keep the ontology description (pool swaps, loads).
  void adopt_store(QuadStore replacement);

  // Idempotent. Same (source, claim, polarity) as an existing attribution:
  // nothing is added. Otherwise the full scaffold goes in, plus rdf:type rows
  // for subject/object derived from the predicate's domain/range.
  // Returns true when a new perspective landed.
  bool integrate(const InteractionGraph& ig);

  std::vector<std::string> claim_iris() const;
  std::vector<std::string> attribution_iris() const;
  std::optional<std::array<Term, 3>> claim_triple(const std::string& claim_iri) const;

  struct Perspective {
    std::string mention;
    std::string attribution;
    std::string source;  // may be empty if the turn scaffold was corrupted away
    std::string turn;
    std::optional<Polarity> polarity;
    std::optional<Certainty> certainty;
    std::optional<Sentiment> sentiment;
  };
  std::vector<Perspective> perspectives_of(const std::string& claim_iri) const;

  // Negation conflicts (claims carrying both polarities) plus cardinality
  // conflicts ((s,p) with ≥2 objects under a single-valued predicate).
  int conflict_count() const;

  // Entity types recorded for an instance in the Instances subgraph, sorted.
  std::vector<std::string> types_of(const Term& entity) const;

  // Empty when the reified-scaffold shape invariants hold; otherwise one line
  // per breach.
  std::vector<std::string> structural_issues() const;

 private:
  Ontology ontology_;
  QuadStore store_;
};

}  // namespace kgagent
