#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace kgagent {

enum class TermKind : std::uint8_t { Iri, Literal, Variable };

// One RDF term. IRIs stay in prefixed form (e.g. "lWorld:diana") — the store
// never expands prefixes, it only compares. Literals carry an optional datatype
// IRI; variables keep their leading '?'.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;
  std::string datatype;  // literals only; empty means plain

  friend auto operator<=>(const Term&, const Term&) = default;
};

Term iri(std::string value);
Term lit(std::string value, std::string datatype = "");
Term var(std::string name);

bool is_iri(const Term& t);
bool is_literal(const Term& t);
bool is_variable(const Term& t);

// Throws MalformedTermError: IRIs need a namespace separator, variables a '?',
// literals must not carry one.
void validate_term(const Term& t);

// Trailing segment after the last ':' , '/' or '#'; literals come back as-is.
std::string local_name(const Term& t);

// Lowercased local name with every non-alphanumeric run collapsed to '-'.
// Used wherever a term has to become part of another IRI.
std::string sanitize_for_iri(const std::string& raw);

std::string to_string(const Term& t);

}  // namespace kgagent
