#include "kgagent/capsule.hpp"

#include <nlohmann/json.hpp>

#include "kgagent/errors.hpp"

namespace kgagent {

void validate_capsule(const Capsule& c) {
  try {
    validate_term(c.subject);
    validate_term(c.predicate);
    validate_term(c.object);
  } catch (const MalformedTermError& e) {
    throw MalformedCapsuleError(e.what());
  }
  if (!is_iri(c.subject)) throw MalformedCapsuleError("capsule subject must be an IRI");
  if (!is_iri(c.predicate)) throw MalformedCapsuleError("capsule predicate must be an IRI");
  if (is_variable(c.object)) throw MalformedCapsuleError("capsule object must be ground");
  if (c.source.empty()) throw MalformedCapsuleError("capsule without source");
  if (c.timestamp.empty()) throw MalformedCapsuleError("capsule without timestamp");
}

Term object_term_from_text(const std::string& text, const std::string& datatype) {
  if (!datatype.empty()) return lit(text, datatype);
  const bool iri_like = text.find(':') != std::string::npos &&
                        text.find(' ') == std::string::npos && !text.empty();
  return iri_like ? iri(text) : lit(text);
}

nlohmann::json capsule_to_json(const Capsule& c) {
  nlohmann::json j{{"source", c.source},
                   {"timestamp", c.timestamp},
                   {"subject", c.subject.value},
                   {"predicate", c.predicate.value},
                   {"object", c.object.value},
                   {"polarity", to_string(c.polarity)},
                   {"certainty", to_string(c.certainty)}};
  if (is_literal(c.object) && !c.object.datatype.empty()) {
    j["object_datatype"] = c.object.datatype;
  } else if (is_literal(c.object) && object_term_from_text(c.object.value).kind != TermKind::Literal) {
    j["object_datatype"] = "";  // literal that would re-parse as an IRI: mark it
  }
  if (c.sentiment) j["sentiment"] = to_string(*c.sentiment);
  return j;
}

Capsule capsule_from_json(const nlohmann::json& j) {
  try {
    Capsule c;
    c.source = j.at("source").get<std::string>();
    c.timestamp = j.at("timestamp").get<std::string>();
    c.subject = iri(j.at("subject").get<std::string>());
    c.predicate = iri(j.at("predicate").get<std::string>());
    if (j.contains("object_datatype")) {
      c.object = lit(j.at("object").get<std::string>(),
                     j.at("object_datatype").get<std::string>());
    } else {
      c.object = object_term_from_text(j.at("object").get<std::string>());
    }
    c.polarity = polarity_from_string(j.at("polarity").get<std::string>());
    c.certainty = certainty_from_string(j.at("certainty").get<std::string>());
    if (j.contains("sentiment") && !j.at("sentiment").is_null()) {
      c.sentiment = sentiment_from_string(j.at("sentiment").get<std::string>());
    }
    validate_capsule(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedCapsuleError(std::string("capsule json: ") + e.what());
  } catch (const ParseError& e) {
    throw MalformedCapsuleError(e.what());
  } catch (const MalformedTermError& e) {
    throw MalformedCapsuleError(e.what());
  }
}

}  // namespace kgagent
