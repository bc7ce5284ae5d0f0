#include "kgagent/graph_metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kgagent/errors.hpp"
#include "kgagent/rand.hpp"
#include "support/fixtures.hpp"
#include "support/floyd_warshall.hpp"

namespace kgagent {
namespace {

using testsupport::make_capsule;
using testsupport::mean_reachable_distance;
using testsupport::toy_ontology;

Quad claim(const std::string& s, const std::string& p, const std::string& o,
           const std::string& graph) {
  return Quad{iri(s), iri(p), iri(o), iri(graph)};
}

Quad typing(const std::string& entity, const std::string& type) {
  return Quad{iri(entity), iri(std::string(vocab::kRdfType)), iri(type),
              iri(std::string(vocab::kInstancesGraph))};
}

// Directed path a -> b -> c, nothing else in the store.
BeliefGraph path_graph() {
  BeliefGraph g;
  g.store().insert(claim("lWorld:a", "n2mu:next", "lWorld:b", "lWorld:a_next_b"));
  g.store().insert(claim("lWorld:b", "n2mu:next", "lWorld:c", "lWorld:b_next_c"));
  return g;
}

TEST(MetricNames, RoundTripSpellingsAndDimensions) {
  const std::vector<std::pair<MetricKind, std::pair<std::string, std::string>>>
      expected = {
          {MetricKind::Sparseness, {"sparseness", "Cohesion"}},
          {MetricKind::AverageDegree, {"average-degree", "Interconnectedness"}},
          {MetricKind::ShortestPath, {"shortest-path", "Specificity"}},
          {MetricKind::TotalTriples, {"total-triples", "Volume"}},
          {MetricKind::AveragePopulation, {"average-population", "Spread"}},
          {MetricKind::RatioClaimsToTriples,
           {"ratio-claims-to-triples", "Completeness"}},
          {MetricKind::RatioPerspectivesToClaims,
           {"ratio-perspectives-to-claims", "Diversity"}},
          {MetricKind::RatioConflictsToClaims,
           {"ratio-conflicts-to-claims", "Correctness"}},
      };
  ASSERT_EQ(expected.size(), static_cast<std::size_t>(kNumMetrics));
  for (const auto& [kind, labels] : expected) {
    EXPECT_EQ(to_string(kind), labels.first);
    EXPECT_EQ(dimension_of(kind), labels.second);
    EXPECT_EQ(metric_from_string(labels.first), kind);
  }
  EXPECT_THROW(metric_from_string("degree"), ParseError);
}

TEST(Metrics, PathGraphWorkedExample) {
  const BeliefGraph g = path_graph();

  const InstanceView view = instance_view(g);
  ASSERT_EQ(view.nodes.size(), 3u);
  EXPECT_EQ(view.nodes[0], iri("lWorld:a"));
  EXPECT_EQ(view.nodes[1], iri("lWorld:b"));
  EXPECT_EQ(view.nodes[2], iri("lWorld:c"));
  EXPECT_EQ(view.edge_count, 2u);
  EXPECT_EQ(view.adjacency[0], std::vector<int>{1});
  EXPECT_EQ(view.adjacency[1], std::vector<int>{2});
  EXPECT_TRUE(view.adjacency[2].empty());

  EXPECT_NEAR(evaluate_metric(MetricKind::Sparseness, g), 2.0 / 9.0, 1e-12);
  EXPECT_NEAR(evaluate_metric(MetricKind::AverageDegree, g), 4.0 / 3.0, 1e-12);
  // Reachable ordered pairs: a->b (1), a->c (2), b->c (1); mean over V = 3.
  EXPECT_NEAR(evaluate_metric(MetricKind::ShortestPath, g), 4.0 / 3.0, 1e-12);
  EXPECT_EQ(evaluate_metric(MetricKind::TotalTriples, g), 2.0);
}

TEST(Metrics, AveragePopulationWorkedExample) {
  Ontology ont;
  ont.types = {"n2mu:person", "n2mu:city"};
  BeliefGraph g(ont);
  g.store().insert(typing("lWorld:alice", "n2mu:person"));
  g.store().insert(typing("lWorld:bob", "n2mu:person"));
  g.store().insert(typing("lWorld:paris", "n2mu:city"));
  EXPECT_NEAR(evaluate_metric(MetricKind::AveragePopulation, g), 1.5, 1e-12);

  // A declared type with no members still counts in the denominator.
  ont.types.push_back("n2mu:ghost");
  BeliefGraph g2(ont);
  g2.store().insert(typing("lWorld:alice", "n2mu:person"));
  g2.store().insert(typing("lWorld:bob", "n2mu:person"));
  g2.store().insert(typing("lWorld:paris", "n2mu:city"));
  EXPECT_NEAR(evaluate_metric(MetricKind::AveragePopulation, g2), 1.0, 1e-12);
}

// 10 claims / 40 quads / 12 attributions / 2 polarity-conflicted claims,
// assembled statement by statement so every denominator is visible.
TEST(Metrics, RatioWorkedExample) {
  BeliefGraph g;
  const Term persp = iri(std::string(vocab::kPerspectivesGraph));
  const Term type = iri(std::string(vocab::kRdfType));

  for (int i = 1; i <= 10; ++i) {
    const std::string n = std::to_string(i);
    g.store().insert(
        claim("lWorld:s" + n, "n2mu:like", "lWorld:o" + n, "lWorld:c" + n));
  }
  // Claims c1 and c2 each carry one positive and one negative perspective.
  int attribution = 0;
  for (int i = 1; i <= 2; ++i) {
    for (const Polarity pol : {Polarity::Positive, Polarity::Negative}) {
      ++attribution;
      const std::string m = "lTalk:men" + std::to_string(attribution);
      const std::string a = "lTalk:attr" + std::to_string(attribution);
      g.store().insert(Quad{iri(m), iri(std::string(vocab::kDenotes)),
                            iri("lWorld:c" + std::to_string(i)), persp});
      g.store().insert(
          Quad{iri(m), iri(std::string(vocab::kHasAttribution)), iri(a), persp});
      g.store().insert(
          Quad{iri(a), type, iri(std::string(vocab::kAttributionClass)), persp});
      g.store().insert(
          Quad{iri(a), iri(std::string(vocab::kRdfValue)), polarity_term(pol), persp});
    }
  }
  // Eight more attributions exist but hang off nothing conflicting.
  for (int j = 5; j <= 12; ++j) {
    g.store().insert(Quad{iri("lTalk:attr" + std::to_string(j)), type,
                          iri(std::string(vocab::kAttributionClass)), persp});
  }
  // Pad the store to 40 statements with instance typing rows.
  for (int k = 1; k <= 6; ++k) {
    g.store().insert(typing("lWorld:x" + std::to_string(k), "n2mu:thing"));
  }

  ASSERT_EQ(g.store().size(), 40u);
  ASSERT_EQ(g.claim_iris().size(), 10u);
  ASSERT_EQ(g.attribution_iris().size(), 12u);
  ASSERT_EQ(g.conflict_count(), 2);

  EXPECT_NEAR(evaluate_metric(MetricKind::RatioClaimsToTriples, g), 0.25, 1e-12);
  EXPECT_NEAR(evaluate_metric(MetricKind::RatioPerspectivesToClaims, g), 1.2, 1e-12);
  EXPECT_NEAR(evaluate_metric(MetricKind::RatioConflictsToClaims, g), 0.2, 1e-12);
  EXPECT_EQ(evaluate_metric(MetricKind::TotalTriples, g), 40.0);
}

// The structural metrics see Claims + Instances only; the provenance scaffold
// and the ontology description never contribute nodes or edges.
TEST(Metrics, InstanceViewIgnoresPerspectivesAndOntology) {
  BeliefGraph g(toy_ontology());
  const auto base = instance_view(g);
  EXPECT_TRUE(base.nodes.empty());  // bootstrap lives in lWorld:Ontology
  EXPECT_EQ(base.edge_count, 0u);

  ASSERT_TRUE(g.integrate(build_interaction_graph(
      make_capsule("lFriends:tom", "lWorld:diana", "n2mu:live", "lWorld:paris"),
      "chat1", 1)));

  // Claim (diana live paris) plus derived typing rows (diana->person,
  // paris->city); the Turn/Mention/Attribution rows are invisible here.
  const InstanceView view = instance_view(g);
  ASSERT_EQ(view.nodes.size(), 4u);
  EXPECT_EQ(view.nodes[0], iri("lWorld:diana"));
  EXPECT_EQ(view.nodes[1], iri("lWorld:paris"));
  EXPECT_EQ(view.nodes[2], iri("n2mu:city"));
  EXPECT_EQ(view.nodes[3], iri("n2mu:person"));
  EXPECT_EQ(view.edge_count, 3u);

  EXPECT_NEAR(evaluate_metric(MetricKind::Sparseness, g), 3.0 / 16.0, 1e-12);
  EXPECT_NEAR(evaluate_metric(MetricKind::AverageDegree, g), 1.5, 1e-12);
  // diana->paris 1, diana->person 1, diana->city 2, paris->city 1; mean over 4.
  EXPECT_NEAR(evaluate_metric(MetricKind::ShortestPath, g), 5.0 / 4.0, 1e-12);
}

TEST(Metrics, ParallelPredicatesCountAsSeparateEdges) {
  BeliefGraph g;
  g.store().insert(claim("lWorld:a", "n2mu:like", "lWorld:b", "lWorld:c1"));
  g.store().insert(claim("lWorld:a", "n2mu:know", "lWorld:b", "lWorld:c2"));

  const InstanceView view = instance_view(g);
  EXPECT_EQ(view.nodes.size(), 2u);
  EXPECT_EQ(view.edge_count, 2u);                  // distinct (s,p,o)
  EXPECT_EQ(view.adjacency[0], std::vector<int>{1});  // one arc for BFS

  EXPECT_NEAR(evaluate_metric(MetricKind::Sparseness, g), 0.5, 1e-12);
  EXPECT_NEAR(evaluate_metric(MetricKind::AverageDegree, g), 2.0, 1e-12);
  EXPECT_NEAR(evaluate_metric(MetricKind::ShortestPath, g), 0.5, 1e-12);
}

TEST(Metrics, ShortestPathMatchesFloydWarshallOracle) {
  std::mt19937 rng(7021);
  for (int round = 0; round < 50; ++round) {
    const int n = 2 + static_cast<int>(draw_below(rng, 19));  // 2..20 nodes
    std::set<std::pair<int, int>> edges;
    const std::size_t attempts = 1 + draw_below(rng, static_cast<std::uint32_t>(2 * n));
    for (std::size_t k = 0; k < attempts; ++k) {
      const int from = static_cast<int>(draw_below(rng, static_cast<std::uint32_t>(n)));
      const int to = static_cast<int>(draw_below(rng, static_cast<std::uint32_t>(n)));
      if (from != to) edges.insert({from, to});
    }
    if (edges.empty()) edges.insert({0, 1});

    BeliefGraph g;
    for (const auto& [from, to] : edges) {
      const std::string fs = "lWorld:v" + std::to_string(from);
      const std::string ts = "lWorld:v" + std::to_string(to);
      g.store().insert(claim(fs, "n2mu:edge", ts,
                             "lWorld:e" + std::to_string(from) + "-" +
                                 std::to_string(to)));
    }

    // The oracle works from the generated edge list over the nodes that
    // actually occur as endpoints — the same universe the projection sees.
    std::set<int> endpoint_set;
    for (const auto& [from, to] : edges) {
      endpoint_set.insert(from);
      endpoint_set.insert(to);
    }
    std::map<int, int> index;
    for (const int node : endpoint_set) {
      index.emplace(node, static_cast<int>(index.size()));
    }
    std::vector<std::vector<int>> adjacency(endpoint_set.size());
    for (const auto& [from, to] : edges) {
      adjacency[static_cast<std::size_t>(index.at(from))].push_back(index.at(to));
    }

    EXPECT_NEAR(evaluate_metric(MetricKind::ShortestPath, g),
                mean_reachable_distance(adjacency), 1e-9)
        << "round " << round;

    // Density metrics against direct counts from the same edge list.
    const double v = static_cast<double>(endpoint_set.size());
    const double e = static_cast<double>(edges.size());
    EXPECT_NEAR(evaluate_metric(MetricKind::Sparseness, g), e / (v * v), 1e-12);
    EXPECT_NEAR(evaluate_metric(MetricKind::AverageDegree, g), 2.0 * e / v, 1e-12);

    const double sparseness = evaluate_metric(MetricKind::Sparseness, g);
    EXPECT_GE(sparseness, 0.0);
    EXPECT_LE(sparseness, 1.0);  // simple digraph, no parallel edges here
  }
}

TEST(Metrics, UndefinedDenominatorsThrowAndCollapseToZero) {
  const BeliefGraph empty;
  EXPECT_THROW(evaluate_metric(MetricKind::Sparseness, empty), UndefinedMetricError);
  EXPECT_THROW(evaluate_metric(MetricKind::AverageDegree, empty), UndefinedMetricError);
  EXPECT_THROW(evaluate_metric(MetricKind::ShortestPath, empty), UndefinedMetricError);
  EXPECT_THROW(evaluate_metric(MetricKind::AveragePopulation, empty),
               UndefinedMetricError);
  EXPECT_THROW(evaluate_metric(MetricKind::RatioClaimsToTriples, empty),
               UndefinedMetricError);
  EXPECT_THROW(evaluate_metric(MetricKind::RatioPerspectivesToClaims, empty),
               UndefinedMetricError);
  EXPECT_THROW(evaluate_metric(MetricKind::RatioConflictsToClaims, empty),
               UndefinedMetricError);
  EXPECT_EQ(evaluate_metric(MetricKind::TotalTriples, empty), 0.0);

  for (int i = 0; i < kNumMetrics; ++i) {
    EXPECT_EQ(evaluate_metric_or_zero(static_cast<MetricKind>(i), empty), 0.0);
  }

  // A bootstrapped graph without claims: ratios still undefined, the rest not.
  const BeliefGraph bootstrapped(toy_ontology());
  EXPECT_THROW(evaluate_metric(MetricKind::RatioPerspectivesToClaims, bootstrapped),
               UndefinedMetricError);
  EXPECT_GT(evaluate_metric(MetricKind::TotalTriples, bootstrapped), 0.0);
  EXPECT_EQ(evaluate_metric(MetricKind::AveragePopulation, bootstrapped), 0.0);
}

TEST(Metrics, RewardContract) {
  EXPECT_NEAR(reward_delta(100.0, 110.0), 0.10, 1e-12);
  for (const double m : {0.0, 0.25, 1.0, 40.0, 1e6}) {
    EXPECT_EQ(reward_delta(m, m), 0.0);
  }
  EXPECT_EQ(reward_delta(0.0, 5.0), 1.0);  // capped growth out of zero
  EXPECT_EQ(reward_delta(0.0, 0.0), 0.0);

  EXPECT_GT(reward_delta(4.0, 6.0), 0.0);
  EXPECT_LT(reward_delta(6.0, 4.0), 0.0);
  EXPECT_LT(reward_delta(5.0, 0.0), 0.0);

  // Audit companion: same magnitude story, inverted orientation.
  EXPECT_NEAR(reward_printed_form(100.0, 110.0), 100.0 / 110.0 - 1.0, 1e-15);
  EXPECT_EQ(reward_printed_form(3.0, 3.0), 0.0);
  EXPECT_LT(reward_printed_form(4.0, 6.0), 0.0);
  EXPECT_GT(reward_printed_form(6.0, 4.0), 0.0);
}

// Spreadsheet-style recomputation of a scripted episode's rewards.
TEST(Metrics, EpisodeRewardRecomputation) {
  const std::vector<double> values = {3.0, 3.0, 4.0, 6.0, 6.0, 0.0};
  const std::vector<double> expected = {0.0, 1.0 / 3.0, 0.5, 0.0, -1.0};
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    EXPECT_NEAR(reward_delta(values[i], values[i + 1]), expected[i], 1e-12)
        << "step " << i;
  }
}

TEST(Metrics, TotalTriplesMonotoneUnderIntegrate) {
  BeliefGraph g(toy_ontology());
  double prev = evaluate_metric(MetricKind::TotalTriples, g);
  EXPECT_GT(prev, 0.0);

  const std::vector<Capsule> capsules = {
      make_capsule("lFriends:tom", "lWorld:diana", "n2mu:live", "lWorld:paris"),
      make_capsule("lFriends:tom", "lWorld:karla", "n2mu:visited", "lWorld:paris"),
      // Duplicate perspective: integrate refuses it, the count must hold still.
      make_capsule("lFriends:tom", "lWorld:diana", "n2mu:live", "lWorld:paris"),
      make_capsule("lFriends:ann", "lWorld:diana", "n2mu:live", "lWorld:paris"),
  };
  int turn = 0;
  for (const Capsule& c : capsules) {
    g.integrate(build_interaction_graph(c, "chat1", ++turn));
    const double next = evaluate_metric(MetricKind::TotalTriples, g);
    EXPECT_GE(next, prev);
    EXPECT_GE(reward_delta(prev, next), 0.0);
    prev = next;
  }
}

}  // namespace
}  // namespace kgagent
