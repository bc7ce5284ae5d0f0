#pragma once

#include <string>
#include <vector>

#include "kgagent/belief.hpp"

namespace kgagent {

// The eight trainable intentions. Enum order matches the reporting order.
enum class MetricKind : int {
  Sparseness = 0,
  AverageDegree = 1,
  ShortestPath = 2,
  TotalTriples = 3,
  AveragePopulation = 4,
  RatioClaimsToTriples = 5,
  RatioPerspectivesToClaims = 6,
  RatioConflictsToClaims = 7,
};

inline constexpr int kNumMetrics = 8;

std::string to_string(MetricKind m);
MetricKind metric_from_string(const std::string& name);
std::string dimension_of(MetricKind m);  // the knowledge dimension label

// Instance-level projection: the Claims and Instances subgraphs seen as a
// digraph over the terms in subject/object position. Edge multiplicity counts
// distinct (s,p,o); BFS walks the deduplicated s->o adjacency.
struct InstanceView {
  std::vector<Term> nodes;  // sorted, distinct
  std::size_t edge_count = 0;
  std::vector<std::vector<int>> adjacency;
};

InstanceView instance_view(const BeliefGraph& ekg);

// Evaluates one metric over the eKG. Throws UndefinedMetricError when the
// metric's denominator is 0 (empty projection / no types / no claims).
double evaluate_metric(MetricKind kind, const BeliefGraph& ekg);
// The RL loop's view: undefined collapses to 0.
double evaluate_metric_or_zero(MetricKind kind, const BeliefGraph& ekg);

// Growth-positive step reward: m_next/m_prev − 1, with 0 for 0→0 and a cap of
// 1 for growth out of zero.
double reward_delta(double m_prev, double m_next);
// The inverted ratio m_prev/m_next − 1: negative on growth. Logged alongside
// reward_delta for auditability, never used for training.
double reward_printed_form(double m_prev, double m_next);

}  // namespace kgagent
