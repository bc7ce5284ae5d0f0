#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kgagent/belief.hpp"
#include "kgagent/capsule.hpp"
#include "kgagent/store.hpp"

namespace kgagent {

// Quality grades of a simulated knowledge source. Vanilla answers straight
// from its store; the other four degrade it in one specific, measurable way.
enum class UserKind : int {
  Vanilla = 0,
  Amateur = 1,     // half the claims missing
  Doubtful = 2,    // half the claims held with low certainty
  Incoherent = 3,  // half the claims negated
  Confused = 4,    // half the claims with a swapped object
};

std::string to_string(UserKind k);
UserKind user_kind_from_string(const std::string& name);

// A conversation partner: a claim/perspective store in the same reified shape
// as the agent's belief network, answered through pattern queries.
struct UserModel {
  UserKind kind = UserKind::Vanilla;
  std::uint32_t rng_seed = 0;
  std::string source = "lFriends:vanilla-0";  // actor IRI stamped on capsules
  BeliefGraph kb;                             // empty ontology; quads only
  // Off by default so answers are reproducible; on, ties among matches are
  // broken by the caller's rng instead of canonical order.
  bool answer_random_among_matches = false;
};

// Builds a user of the given grade from a pristine store. Exactly
// floor(C/2) claims are affected for the non-vanilla kinds; selection is a
// seeded uniform draw without replacement, so the result is a pure function
// of (base, kind, seed). Throws EmptyKnowledgeBaseError when a corruption is
// asked for but the base holds no claims (or, for Confused, when no distinct
// replacement object exists).
UserModel corrupt(const QuadStore& base, UserKind kind, std::uint32_t seed);

// Answers a desire query: the first match in canonical binding order becomes
// a capsule carrying the completed triple and the user's stored perspective
// on it. No match (or an empty query) falls back to a uniformly random claim
// — the user keeps talking about whatever it knows. Throws
// EmptyKnowledgeBaseError when the store holds no claims at all.
Capsule answer(const UserModel& user, const PatternQuery& query, std::mt19937& rng);

// Conversation opener: a random claim from the user's store.
inline Capsule opening_statement(const UserModel& user, std::mt19937& rng) {
  return answer(user, PatternQuery{}, rng);
}

// Content fingerprint of a store (over its canonical serialization); ties a
// saved population back to the base it was corrupted from.
std::string kb_fingerprint(const QuadStore& store);

// A population on disk: one N-Quads file per user plus manifest.json holding
// (kind, seed, source, file, base_hash) per user.
void save_population(const std::string& dir, const std::vector<UserModel>& users,
                     const std::string& base_hash);
std::vector<UserModel> load_population(const std::string& dir);

}  // namespace kgagent
