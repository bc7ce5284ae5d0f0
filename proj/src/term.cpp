#include "kgagent/term.hpp"

#include <cctype>

#include "kgagent/errors.hpp"

namespace kgagent {

Term iri(std::string value) {
  Term t{TermKind::Iri, std::move(value), ""};
  validate_term(t);
  return t;
}

Term lit(std::string value, std::string datatype) {
  return Term{TermKind::Literal, std::move(value), std::move(datatype)};
}

Term var(std::string name) {
  Term t{TermKind::Variable, std::move(name), ""};
  validate_term(t);
  return t;
}

bool is_iri(const Term& t) { return t.kind == TermKind::Iri; }
bool is_literal(const Term& t) { return t.kind == TermKind::Literal; }
bool is_variable(const Term& t) { return t.kind == TermKind::Variable; }

void validate_term(const Term& t) {
  switch (t.kind) {
    case TermKind::Iri:
      if (t.value.empty() || t.value.find_first_of(":/#") == std::string::npos) {
        throw MalformedTermError("not an IRI: '" + t.value + "'");
      }
      if (!t.datatype.empty()) {
        throw MalformedTermError("IRI with datatype: '" + t.value + "'");
      }
      break;
    case TermKind::Literal:
      break;  // any lexical form goes, datatype optional
    case TermKind::Variable:
      if (t.value.size() < 2 || t.value[0] != '?') {
        throw MalformedTermError("variable must be '?name': '" + t.value + "'");
      }
      if (!t.datatype.empty()) {
        throw MalformedTermError("variable with datatype: '" + t.value + "'");
      }
      break;
  }
}

std::string local_name(const Term& t) {
  if (t.kind != TermKind::Iri) return t.value;
  const auto pos = t.value.find_last_of(":/#");
  return pos == std::string::npos ? t.value : t.value.substr(pos + 1);
}

std::string sanitize_for_iri(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_dash = false;
  for (const char c : raw) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (pending_dash && !out.empty()) out.push_back('-');
      pending_dash = false;
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      pending_dash = true;
    }
  }
  return out;
}

std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::Literal:
      return t.datatype.empty() ? '"' + t.value + '"'
                                : '"' + t.value + "\"^^" + t.datatype;
    default:
      return t.value;
  }
}

}  // namespace kgagent
