#include "kgagent/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "kgagent/errors.hpp"

namespace kgagent {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// "Karla Gonzalez" -> "karla-gonzalez"; used to turn bare reply fields into
// IRI local names.
std::string slug(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

}  // namespace

PromptTemplates load_prompt_templates(const std::filesystem::path& dir) {
  PromptTemplates templates;
  for (int i = 0; i < kNumPatterns; ++i) {
    const auto path = dir / (to_string(static_cast<AbstractPattern>(i)) + ".txt");
    std::ifstream in(path);
    if (!in.good()) throw Error("missing prompt template: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    templates[i] = trim(buffer.str());
    if (templates[i].empty()) throw Error("blank prompt template: " + path.string());
  }
  return templates;
}

std::string friendly_term(const Term& t) {
  if (!is_iri(t)) return t.value;
  std::string name = t.value.substr(t.value.find(':') + 1);
  std::replace(name.begin(), name.end(), '-', ' ');
  std::replace(name.begin(), name.end(), '_', ' ');
  return name;
}

std::string render_prompt(const PromptTemplates& templates, const DesireInstance& d) {
  const std::string& raw = templates.at(static_cast<std::size_t>(d.pattern));
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    const auto open = raw.find('{', i);
    if (open == std::string::npos) {
      out.append(raw, i, raw.size() - i);
      break;
    }
    const auto close = raw.find('}', open);
    if (close == std::string::npos) {
      out.append(raw, i, raw.size() - i);
      break;
    }
    out.append(raw, i, open - i);
    const std::string name = raw.substr(open + 1, close - open - 1);
    if (const Term* bound = d.binding(name)) {
      out += friendly_term(*bound);
    } else {
      out.append(raw, open, close - open + 1);  // leave the typo on display
    }
    i = close + 1;
  }
  return out;
}

Capsule parse_reply(const std::string& line) {
  std::vector<std::string> fields;
  std::string piece;
  std::istringstream in(line);
  while (std::getline(in, piece, '|')) fields.push_back(trim(piece));
  if (fields.size() < 3 || fields.size() > 5) {
    throw MalformedCapsuleError(
        "expected 'subject | predicate | object [| polarity [| certainty]]', got '" +
        trim(line) + "'");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (fields[i].empty()) throw MalformedCapsuleError("blank field in reply");
  }

  Capsule c;
  c.subject = fields[0].find(':') != std::string::npos ? iri(fields[0])
                                                       : iri("lWorld:" + slug(fields[0]));
  c.predicate = fields[1].find(':') != std::string::npos ? iri(fields[1])
                                                         : iri("n2mu:" + slug(fields[1]));
  c.object = object_term_from_text(fields[2]);
  try {
    if (fields.size() >= 4) c.polarity = polarity_from_string(fields[3]);
    if (fields.size() == 5) c.certainty = certainty_from_string(fields[4]);
  } catch (const ParseError& e) {
    throw MalformedCapsuleError(e.what());
  }
  return c;
}

}  // namespace kgagent
