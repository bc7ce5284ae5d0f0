#include "kgagent/vocab.hpp"

#include <cctype>

#include "kgagent/errors.hpp"

namespace kgagent {

Subgraph classify_graph(const std::string& graph_iri) {
  if (graph_iri == vocab::kOntologyGraph) return Subgraph::Ontology;
  if (graph_iri == vocab::kInstancesGraph) return Subgraph::Instances;
  if (graph_iri == vocab::kPerspectivesGraph) return Subgraph::Perspectives;
  if (graph_iri == vocab::kInteractionsGraph) return Subgraph::Interactions;
  return Subgraph::Claims;  // every other named graph is a reified claim
}

std::string to_string(Subgraph s) {
  switch (s) {
    case Subgraph::Ontology: return "ontology";
    case Subgraph::Instances: return "instances";
    case Subgraph::Claims: return "claims";
    case Subgraph::Perspectives: return "perspectives";
    case Subgraph::Interactions: return "interactions";
    case Subgraph::Any: return "any";
  }
  return "?";
}

std::string to_string(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }
std::string to_string(Certainty c) { return c == Certainty::Certain ? "certain" : "uncertain"; }

std::string to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return "positive";
    case Sentiment::Negative: return "negative";
    case Sentiment::Neutral: return "neutral";
  }
  return "?";
}

Polarity polarity_from_string(const std::string& s) {
  if (s == "positive") return Polarity::Positive;
  if (s == "negative") return Polarity::Negative;
  throw ParseError("unknown polarity: '" + s + "'");
}

Certainty certainty_from_string(const std::string& s) {
  if (s == "certain") return Certainty::Certain;
  if (s == "uncertain") return Certainty::Uncertain;
  throw ParseError("unknown certainty: '" + s + "'");
}

Sentiment sentiment_from_string(const std::string& s) {
  if (s == "positive") return Sentiment::Positive;
  if (s == "negative") return Sentiment::Negative;
  if (s == "neutral") return Sentiment::Neutral;
  throw ParseError("unknown sentiment: '" + s + "'");
}

Term polarity_term(Polarity p) {
  return iri(std::string(p == Polarity::Positive ? vocab::kPolarityPositive
                                                 : vocab::kPolarityNegative));
}

Term certainty_term(Certainty c) {
  return iri(std::string(c == Certainty::Certain ? vocab::kCertaintyCertain
                                                 : vocab::kCertaintyUncertain));
}

Term sentiment_term(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return iri(std::string(vocab::kSentimentPositive));
    case Sentiment::Negative: return iri(std::string(vocab::kSentimentNegative));
    default: return iri(std::string(vocab::kSentimentNeutral));
  }
}

std::optional<Polarity> polarity_from_term(const Term& t) {
  if (t.value == vocab::kPolarityPositive) return Polarity::Positive;
  if (t.value == vocab::kPolarityNegative) return Polarity::Negative;
  return std::nullopt;
}

std::optional<Certainty> certainty_from_term(const Term& t) {
  if (t.value == vocab::kCertaintyCertain) return Certainty::Certain;
  if (t.value == vocab::kCertaintyUncertain) return Certainty::Uncertain;
  return std::nullopt;
}

std::optional<Sentiment> sentiment_from_term(const Term& t) {
  if (t.value == vocab::kSentimentPositive) return Sentiment::Positive;
  if (t.value == vocab::kSentimentNegative) return Sentiment::Negative;
  if (t.value == vocab::kSentimentNeutral) return Sentiment::Neutral;
  return std::nullopt;
}

std::string claim_graph_iri(const Term& s, const Term& p, const Term& o) {
  return std::string(vocab::kWorldNs) + sanitize_for_iri(local_name(s)) + '_' +
         sanitize_for_iri(local_name(p)) + '_' + sanitize_for_iri(local_name(o));
}

std::string turn_iri(const std::string& chat_id, int turn_no) {
  return std::string(vocab::kTalkNs) + chat_id + "_turn" + std::to_string(turn_no);
}

std::string mention_iri(const std::string& turn) { return turn + "_MEN1"; }

std::string attribution_iri(const std::string& mention) { return mention + "_ATTR1"; }

std::string time_iri(const std::string& raw_timestamp) {
  std::string digits;
  for (const char c : raw_timestamp) {
    if (std::isalnum(static_cast<unsigned char>(c))) digits.push_back(c);
  }
  if (digits.empty()) throw MalformedTermError("empty timestamp: '" + raw_timestamp + "'");
  return std::string(vocab::kTimeNs) + digits;
}

}  // namespace kgagent
