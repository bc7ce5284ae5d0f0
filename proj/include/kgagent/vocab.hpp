#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "kgagent/term.hpp"

namespace kgagent {

// Which of the five stores a named graph belongs to. Membership is encoded in
// the graph IRI itself: four fixed graphs, and every other graph is a claim.
enum class Subgraph : std::uint8_t {
  Ontology,
  Instances,
  Claims,
  Perspectives,
  Interactions,
  Any,  // pattern wildcard, never a classification result
};

Subgraph classify_graph(const std::string& graph_iri);
std::string to_string(Subgraph s);

enum class Polarity : std::uint8_t { Positive, Negative };
enum class Certainty : std::uint8_t { Certain, Uncertain };
enum class Sentiment : std::uint8_t { Positive, Negative, Neutral };

std::string to_string(Polarity p);
std::string to_string(Certainty c);
std::string to_string(Sentiment s);
Polarity polarity_from_string(const std::string& s);
Certainty certainty_from_string(const std::string& s);
Sentiment sentiment_from_string(const std::string& s);

namespace vocab {

inline constexpr std::string_view kWorldNs = "lWorld:";
inline constexpr std::string_view kTalkNs = "lTalk:";
inline constexpr std::string_view kTimeNs = "lTime:";

inline constexpr std::string_view kOntologyGraph = "lWorld:Ontology";
inline constexpr std::string_view kInstancesGraph = "lWorld:Instances";
inline constexpr std::string_view kPerspectivesGraph = "lTalk:Perspectives";
inline constexpr std::string_view kInteractionsGraph = "lTalk:Interactions";

inline constexpr std::string_view kRdfType = "rdf:type";
inline constexpr std::string_view kRdfValue = "rdf:value";
inline constexpr std::string_view kRdfsClass = "rdfs:Class";
inline constexpr std::string_view kRdfsDomain = "rdfs:domain";
inline constexpr std::string_view kRdfsRange = "rdfs:range";
inline constexpr std::string_view kOwlCardinality = "owl:cardinality";
inline constexpr std::string_view kXsdInt = "xsd:int";

inline constexpr std::string_view kDenotes = "grasp:denotes";
inline constexpr std::string_view kHasAttribution = "grasp:hasAttribution";
inline constexpr std::string_view kWasDerivedFrom = "prov:wasDerivedFrom";
inline constexpr std::string_view kHasActor = "sem:hasActor";
inline constexpr std::string_view kHasTime = "sem:hasTime";

inline constexpr std::string_view kTurnClass = "grasp:Turn";
inline constexpr std::string_view kMentionClass = "grasp:Mention";
inline constexpr std::string_view kAttributionClass = "grasp:Attribution";

inline constexpr std::string_view kPolarityPositive = "graspPolarity:positive";
inline constexpr std::string_view kPolarityNegative = "graspPolarity:negative";
inline constexpr std::string_view kCertaintyCertain = "graspCertainty:certain";
inline constexpr std::string_view kCertaintyUncertain = "graspCertainty:uncertain";
inline constexpr std::string_view kSentimentPositive = "graspSentiment:positive";
inline constexpr std::string_view kSentimentNegative = "graspSentiment:negative";
inline constexpr std::string_view kSentimentNeutral = "graspSentiment:neutral";

}  // namespace vocab

Term polarity_term(Polarity p);
Term certainty_term(Certainty c);
Term sentiment_term(Sentiment s);
std::optional<Polarity> polarity_from_term(const Term& t);
std::optional<Certainty> certainty_from_term(const Term& t);
std::optional<Sentiment> sentiment_from_term(const Term& t);

// lWorld:<subject>_<predicate>_<object>, each part sanitized. Two capsules that
// assert the same triple land in the same claim graph — that is the dedup key.
std::string claim_graph_iri(const Term& s, const Term& p, const Term& o);

std::string turn_iri(const std::string& chat_id, int turn_no);
std::string mention_iri(const std::string& turn_iri);      // <turn>_MEN1
std::string attribution_iri(const std::string& mention);   // <mention>_ATTR1

// lTime:<digits-and-letters-only>, e.g. "14-01-2022" -> lTime:14012022.
std::string time_iri(const std::string& raw_timestamp);

}  // namespace kgagent
