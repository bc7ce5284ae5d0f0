#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgagent/belief.hpp"
#include "kgagent/store.hpp"

namespace kgagent {

// The eight deployable conversational moves. Enum order is the canonical
// action order everywhere (policy heads, logs, reports).
enum class AbstractPattern : int {
  NegationConflict = 0,
  CardinalityConflict = 1,
  SubjectGap = 2,
  ObjectGap = 3,
  StatementNovelty = 4,
  EntityNovelty = 5,
  SubjectOverlap = 6,
  ObjectOverlap = 7,
};

inline constexpr int kNumPatterns = 8;

enum class KnowledgeAspect { Correctness, Completeness, Redundancy, Interconnectedness };

KnowledgeAspect aspect_of(AbstractPattern p);
std::string to_string(AbstractPattern p);
std::string to_string(KnowledgeAspect a);
AbstractPattern pattern_from_string(const std::string& name);

// One concrete, askable instantiation of a pattern against the current eKG.
struct DesireInstance {
  AbstractPattern pattern = AbstractPattern::EntityNovelty;
  // slot name -> bound term, sorted by slot name. Slots are the pattern's
  // to-instantiate positions (anchor claim parts; searched predicate/types
  // for the gap patterns; the entity for EntityNovelty).
  std::vector<std::pair<std::string, Term>> bindings;
  std::vector<std::string> involved_types;  // sorted entity-type IRIs
  std::optional<std::string> free_slot;     // variable the user is asked to fill

  const Term* binding(const std::string& slot) const;
  nlohmann::json to_json() const;

  friend bool operator==(const DesireInstance&, const DesireInstance&) = default;
};

// All satisfiable instantiations of the eight patterns, anchored on the last
// iKG's claim, deduplicated, in canonical order (pattern, then bindings),
// truncated to `cap`. Never empty: a synthetic EntityNovelty on the iKG
// subject stands in when nothing else fires.
std::vector<DesireInstance> generate_desires(const BeliefGraph& ekg,
                                             const InteractionGraph& last_ikg,
                                             std::size_t cap = 64);

// The question to put to the user. Gap/cardinality desires ask for the free
// object; EntityNovelty asks for anything about the entity; the rest request
// the user's attribution on the bound claim (a Perspectives-shaped query).
PatternQuery render_user_query(const DesireInstance& d);

}  // namespace kgagent
