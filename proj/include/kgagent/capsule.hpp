#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>

#include "kgagent/term.hpp"
#include "kgagent/vocab.hpp"

namespace kgagent {

// One utterance reduced to a statement plus how the speaker stands behind it.
// This is the entire NLU boundary: everything upstream of a Capsule (parsing,
// entity resolution) is out of scope.
struct Capsule {
  std::string source;     // speaker IRI, e.g. lFriends:marco
  std::string timestamp;  // free-form date token, normalized via time_iri()
  Term subject;
  Term predicate;
  Term object;  // IRI or literal
  Polarity polarity = Polarity::Positive;
  Certainty certainty = Certainty::Certain;
  std::optional<Sentiment> sentiment;
};

// Enumeration and shape checks; throws MalformedCapsuleError.
void validate_capsule(const Capsule& c);

// JSON field names mirror the struct exactly. subject/predicate are IRI
// strings; object is an IRI when it has a namespace separator and no spaces,
// otherwise a plain literal — "object_datatype" forces a typed literal.
nlohmann::json capsule_to_json(const Capsule& c);
Capsule capsule_from_json(const nlohmann::json& j);

// "lWorld:paris" -> IRI, "red hair" -> literal; datatype forces a literal.
Term object_term_from_text(const std::string& text, const std::string& datatype = "");

}  // namespace kgagent
