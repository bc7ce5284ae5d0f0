#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "kgagent/capsule.hpp"
#include "kgagent/desire.hpp"

namespace kgagent {

// One English prompt per pattern, indexed by the AbstractPattern enum. The
// wording lives in one text file per pattern (<dir>/<pattern-name>.txt) so it
// can be edited without a rebuild.
using PromptTemplates = std::array<std::string, kNumPatterns>;

// Throws Error naming the first missing or blank template file.
PromptTemplates load_prompt_templates(const std::filesystem::path& dir);

// IRIs read better without their namespace: "n2mu:born-in" -> "born in".
// Literals pass through untouched.
std::string friendly_term(const Term& t);

// Fills {slot} placeholders from the desire's bindings. A placeholder with no
// matching binding stays verbatim, which makes template typos visible in the
// rendered prompt instead of silently vanishing.
std::string render_prompt(const PromptTemplates& templates, const DesireInstance& d);

// One structured chat reply:
//   subject | predicate | object [| polarity [| certainty]]
// Bare subjects and predicates pick up the lWorld:/n2mu: namespaces; the
// object becomes an IRI when it carries a namespace of its own, a plain
// literal otherwise. Source and timestamp are left for the caller to stamp.
// Throws MalformedCapsuleError with a usage hint on anything else.
Capsule parse_reply(const std::string& line);

}  // namespace kgagent
