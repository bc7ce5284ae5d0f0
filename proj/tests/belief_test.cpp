#include "kgagent/belief.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>

#include "kgagent/errors.hpp"
#include "kgagent/nquads.hpp"
#include "support/fixtures.hpp"

namespace kgagent {
namespace {

using testsupport::make_capsule;
using testsupport::toy_ontology;

// The canonical worked example: marco says on 14-01-2022, uncertainly, that
// diana lives in paris. Every expected quad is written out longhand here on
// purpose — this block is the frozen oracle for the whole iKG shape.
const char* const kExpectedIkg =
    "<lWorld:diana> <n2mu:live> <lWorld:paris> <lWorld:diana_live_paris> .\n"
    "<lTalk:chat1_turn1> <rdf:type> <grasp:Turn> <lTalk:Interactions> .\n"
    "<lTalk:chat1_turn1> <sem:hasActor> <lFriends:marco> <lTalk:Interactions> .\n"
    "<lTalk:chat1_turn1> <sem:hasTime> <lTime:14012022> <lTalk:Interactions> .\n"
    "<lTalk:chat1_turn1_MEN1> <rdf:type> <grasp:Mention> <lTalk:Perspectives> .\n"
    "<lTalk:chat1_turn1_MEN1> <grasp:denotes> <lWorld:diana_live_paris> <lTalk:Perspectives> .\n"
    "<lTalk:chat1_turn1_MEN1> <prov:wasDerivedFrom> <lTalk:chat1_turn1> <lTalk:Perspectives> .\n"
    "<lTalk:chat1_turn1_MEN1> <grasp:hasAttribution> <lTalk:chat1_turn1_MEN1_ATTR1> "
    "<lTalk:Perspectives> .\n"
    "<lTalk:chat1_turn1_MEN1_ATTR1> <rdf:type> <grasp:Attribution> <lTalk:Perspectives> .\n"
    "<lTalk:chat1_turn1_MEN1_ATTR1> <rdf:value> <graspPolarity:positive> "
    "<lTalk:Perspectives> .\n"
    "<lTalk:chat1_turn1_MEN1_ATTR1> <rdf:value> <graspCertainty:uncertain> "
    "<lTalk:Perspectives> .\n";

InteractionGraph marco_diana_paris() {
  return build_interaction_graph(
      make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris",
                   Polarity::Positive, Certainty::Uncertain),
      "chat1", 1);
}

TEST(InteractionGraph, MatchesTheWorkedExampleQuadForQuad) {
  const InteractionGraph ig = marco_diana_paris();
  QuadStore got;
  for (const Quad& q : ig.quads) got.insert(q);
  EXPECT_EQ(got.quads(), parse_nquads_text(kExpectedIkg).quads());
  EXPECT_EQ(ig.quads.size(), 11u);  // claim + 10 scaffold rows
  EXPECT_EQ(ig.claim_iri, "lWorld:diana_live_paris");
}

TEST(InteractionGraph, SentimentAddsExactlyOneValueQuad) {
  Capsule c = make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris");
  c.sentiment = Sentiment::Negative;
  const InteractionGraph ig = build_interaction_graph(c, "chat1", 1);
  EXPECT_EQ(ig.quads.size(), 12u);
  EXPECT_EQ(ig.quads.back().o.value, "graspSentiment:negative");
}

TEST(InteractionGraph, ClaimIdentityIgnoresSourceAndTurn) {
  const auto a = build_interaction_graph(
      make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris"), "chat1", 1);
  const auto b = build_interaction_graph(
      make_capsule("lFriends:selene", "lWorld:diana", "n2mu:live", "lWorld:paris"), "chat7", 3);
  EXPECT_EQ(a.claim_iri, b.claim_iri);
  EXPECT_NE(a.mention_iri, b.mention_iri);
  EXPECT_NE(a.attribution_iri, b.attribution_iri);
}

TEST(InteractionGraph, LiteralObjectsGetSanitizedClaimIds) {
  const auto ig = build_interaction_graph(
      make_capsule("lFriends:marco", "lWorld:diana", "n2mu:looks", "red hair"), "chat1", 1);
  EXPECT_EQ(ig.claim_iri, "lWorld:diana_looks_red-hair");
  EXPECT_TRUE(is_literal(ig.object));
}

TEST(InteractionGraph, RejectsBrokenCapsules) {
  Capsule c = make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris");
  c.source.clear();
  EXPECT_THROW(build_interaction_graph(c, "chat1", 1), MalformedCapsuleError);
  c = make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris");
  c.timestamp.clear();
  EXPECT_THROW(build_interaction_graph(c, "chat1", 1), MalformedCapsuleError);
  EXPECT_THROW(build_interaction_graph(
                   make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris"),
                   "", 1),
               MalformedCapsuleError);
}

TEST(Capsule, JsonRoundTripKeepsEveryField) {
  Capsule c = make_capsule("lFriends:marco", "lWorld:diana", "n2mu:looks", "red hair",
                           Polarity::Negative, Certainty::Uncertain);
  c.sentiment = Sentiment::Neutral;
  const Capsule back = capsule_from_json(capsule_to_json(c));
  EXPECT_EQ(back.source, c.source);
  EXPECT_EQ(back.subject, c.subject);
  EXPECT_EQ(back.object, c.object);
  EXPECT_EQ(back.polarity, c.polarity);
  EXPECT_EQ(back.certainty, c.certainty);
  EXPECT_EQ(back.sentiment, c.sentiment);

  Capsule with_iri = make_capsule("lFriends:x", "lWorld:a", "n2mu:live", "lWorld:paris");
  EXPECT_TRUE(is_iri(capsule_from_json(capsule_to_json(with_iri)).object));
}

TEST(BeliefGraph, IntegrateIntoEmptyIsIkgPlusBootstrap) {
  BeliefGraph ekg(toy_ontology());
  const std::size_t bootstrap = ekg.store().size();
  const InteractionGraph ig = marco_diana_paris();
  EXPECT_TRUE(ekg.integrate(ig));

  for (const Quad& q : ig.quads) EXPECT_TRUE(ekg.store().contains(q));
  // everything beyond the iKG is bootstrap schema or derived typing
  QuadStore ikg_set;
  for (const Quad& q : ig.quads) ikg_set.insert(q);
  for (const Quad& q : ekg.store().quads()) {
    if (ikg_set.contains(q)) continue;
    const Subgraph where = classify_graph(q.g.value);
    EXPECT_TRUE(where == Subgraph::Ontology || where == Subgraph::Instances)
        << to_string(q);
  }
  // typing rows derived from n2mu:live's domain/range
  EXPECT_TRUE(ekg.store().contains(Quad{iri("lWorld:diana"), iri("rdf:type"),
                                        iri("n2mu:person"),
                                        iri(std::string(vocab::kInstancesGraph))}));
  EXPECT_TRUE(ekg.store().contains(Quad{iri("lWorld:paris"), iri("rdf:type"),
                                        iri("n2mu:city"),
                                        iri(std::string(vocab::kInstancesGraph))}));
  EXPECT_EQ(ekg.store().size(), bootstrap + 11 + 2);
}

TEST(BeliefGraph, IntegrateIsIdempotent) {
  BeliefGraph ekg(toy_ontology());
  EXPECT_TRUE(ekg.integrate(marco_diana_paris()));
  const auto before = ekg.store().quads();
  EXPECT_FALSE(ekg.integrate(marco_diana_paris()));
  EXPECT_EQ(ekg.store().quads(), before);
}

TEST(BeliefGraph, SameSourceSamePolarityDifferentTurnAddsNothing) {
  BeliefGraph ekg(toy_ontology());
  ekg.integrate(marco_diana_paris());
  const auto before = ekg.store().quads();
  // marco repeats himself two turns later
  EXPECT_FALSE(ekg.integrate(build_interaction_graph(
      make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris"),
      "chat1", 3)));
  EXPECT_EQ(ekg.store().quads(), before);
}

TEST(BeliefGraph, TwoSourcesAccumulatePerspectives) {
  BeliefGraph ekg(toy_ontology());
  ekg.integrate(marco_diana_paris());
  EXPECT_TRUE(ekg.integrate(build_interaction_graph(
      make_capsule("lFriends:selene", "lWorld:diana", "n2mu:live", "lWorld:paris"),
      "chat2", 1)));

  EXPECT_EQ(ekg.claim_iris().size(), 1u);
  EXPECT_EQ(ekg.attribution_iris().size(), 2u);
  const auto perspectives = ekg.perspectives_of("lWorld:diana_live_paris");
  ASSERT_EQ(perspectives.size(), 2u);
  std::set<std::string> sources;
  for (const auto& p : perspectives) sources.insert(p.source);
  EXPECT_EQ(sources, (std::set<std::string>{"lFriends:marco", "lFriends:selene"}));
  EXPECT_EQ(ekg.conflict_count(), 0);
}

TEST(BeliefGraph, PolarityFlipBySameSourceAddsAndConflicts) {
  BeliefGraph ekg(toy_ontology());
  ekg.integrate(marco_diana_paris());
  EXPECT_TRUE(ekg.integrate(build_interaction_graph(
      make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris",
                   Polarity::Negative),
      "chat1", 5)));
  EXPECT_EQ(ekg.claim_iris().size(), 1u);
  EXPECT_EQ(ekg.attribution_iris().size(), 2u);
  EXPECT_EQ(ekg.conflict_count(), 1);  // negation conflict
}

TEST(BeliefGraph, CardinalityConflictNeedsSingleValuedPredicate) {
  BeliefGraph ekg(toy_ontology());
  // born-in is single-valued; live is not
  ekg.integrate(build_interaction_graph(
      make_capsule("lFriends:marco", "lWorld:karla", "n2mu:born-in", "lWorld:france"),
      "chat1", 1));
  ekg.integrate(build_interaction_graph(
      make_capsule("lFriends:selene", "lWorld:karla", "n2mu:born-in", "lWorld:peru"),
      "chat2", 1));
  ekg.integrate(build_interaction_graph(
      make_capsule("lFriends:marco", "lWorld:diana", "n2mu:live", "lWorld:paris"),
      "chat1", 3));
  ekg.integrate(build_interaction_graph(
      make_capsule("lFriends:selene", "lWorld:diana", "n2mu:live", "lWorld:amsterdam"),
      "chat2", 3));
  EXPECT_EQ(ekg.conflict_count(), 1);  // karla's two birth countries only
}

TEST(BeliefGraph, WorkedExampleCounts) {
  BeliefGraph ekg(toy_ontology());
  ekg.integrate(marco_diana_paris());
  EXPECT_EQ(ekg.claim_iris().size(), 1u);
  EXPECT_EQ(ekg.attribution_iris().size(), 1u);
  EXPECT_EQ(ekg.conflict_count(), 0);

  BeliefGraph empty(toy_ontology());
  EXPECT_EQ(empty.claim_iris().size(), 0u);
  EXPECT_EQ(empty.attribution_iris().size(), 0u);
  EXPECT_EQ(empty.conflict_count(), 0);
}

TEST(BeliefGraph, StructuralInvariantsHoldAfterEveryIntegrate) {
  BeliefGraph ekg(toy_ontology());
  EXPECT_TRUE(ekg.structural_issues().empty());
  ekg.integrate(marco_diana_paris());
  EXPECT_TRUE(ekg.structural_issues().empty()) << ekg.structural_issues().front();
  ekg.integrate(build_interaction_graph(
      make_capsule("lFriends:selene", "lWorld:karla", "n2mu:born-in", "lWorld:peru"),
      "chat2", 1));
  EXPECT_TRUE(ekg.structural_issues().empty()) << ekg.structural_issues().front();

  // break it on purpose: orphan the mention's turn
  ekg.store().erase_if([](const Quad& q) { return q.p.value == "rdf:type" &&
                                                  q.o.value == "grasp:Turn"; });
  EXPECT_FALSE(ekg.structural_issues().empty());
}

TEST(BeliefGraph, ResetRestoresBootstrapOnly) {
  BeliefGraph ekg(toy_ontology());
  const auto bootstrap = ekg.store().quads();
  ekg.integrate(marco_diana_paris());
  ekg.reset();
  EXPECT_EQ(ekg.store().quads(), bootstrap);
}

TEST(BeliefGraph, TypesOfReadsInstancesSubgraph) {
  BeliefGraph ekg(toy_ontology());
  ekg.integrate(marco_diana_paris());
  EXPECT_EQ(ekg.types_of(iri("lWorld:diana")), std::vector<std::string>{"n2mu:person"});
  EXPECT_EQ(ekg.types_of(iri("lWorld:paris")), std::vector<std::string>{"n2mu:city"});
  EXPECT_TRUE(ekg.types_of(iri("lWorld:unknown")).empty());
  EXPECT_TRUE(ekg.types_of(lit("red hair")).empty());
}

}  // namespace
}  // namespace kgagent
