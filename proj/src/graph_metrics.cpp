#include "kgagent/graph_metrics.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "kgagent/errors.hpp"

namespace kgagent {

std::string to_string(MetricKind m) {
  switch (m) {
    case MetricKind::Sparseness: return "sparseness";
    case MetricKind::AverageDegree: return "average-degree";
    case MetricKind::ShortestPath: return "shortest-path";
    case MetricKind::TotalTriples: return "total-triples";
    case MetricKind::AveragePopulation: return "average-population";
    case MetricKind::RatioClaimsToTriples: return "ratio-claims-to-triples";
    case MetricKind::RatioPerspectivesToClaims: return "ratio-perspectives-to-claims";
    case MetricKind::RatioConflictsToClaims: return "ratio-conflicts-to-claims";
  }
  throw Error("unhandled metric");
}

MetricKind metric_from_string(const std::string& name) {
  for (int i = 0; i < kNumMetrics; ++i) {
    const auto m = static_cast<MetricKind>(i);
    if (to_string(m) == name) return m;
  }
  throw ParseError("unknown metric: '" + name + "'");
}

std::string dimension_of(MetricKind m) {
  switch (m) {
    case MetricKind::Sparseness: return "Cohesion";
    case MetricKind::AverageDegree: return "Interconnectedness";
    case MetricKind::ShortestPath: return "Specificity";
    case MetricKind::TotalTriples: return "Volume";
    case MetricKind::AveragePopulation: return "Spread";
    case MetricKind::RatioClaimsToTriples: return "Completeness";
    case MetricKind::RatioPerspectivesToClaims: return "Diversity";
    case MetricKind::RatioConflictsToClaims: return "Correctness";
  }
  throw Error("unhandled metric");
}

InstanceView instance_view(const BeliefGraph& ekg) {
  std::set<Term> node_set;
  std::set<std::array<Term, 3>> triples;
  ekg.store().for_each([&](const Quad& q) {
    const Subgraph where = classify_graph(q.g.value);
    if (where != Subgraph::Claims && where != Subgraph::Instances) return;
    node_set.insert(q.s);
    node_set.insert(q.o);
    triples.insert({q.s, q.p, q.o});
  });

  InstanceView view;
  view.nodes.assign(node_set.begin(), node_set.end());
  view.edge_count = triples.size();

  std::map<Term, int> index;
  for (std::size_t i = 0; i < view.nodes.size(); ++i) {
    index[view.nodes[i]] = static_cast<int>(i);
  }
  std::set<std::pair<int, int>> arcs;
  for (const auto& [s, p, o] : triples) arcs.insert({index.at(s), index.at(o)});

  view.adjacency.resize(view.nodes.size());
  for (const auto& [from, to] : arcs) view.adjacency[from].push_back(to);
  return view;
}

namespace {

// Sum of BFS distances over reachable ordered pairs (i != j).
double reachable_distance_sum(const InstanceView& view) {
  const int n = static_cast<int>(view.nodes.size());
  double total = 0;
  std::vector<int> dist(static_cast<std::size_t>(n));
  for (int start = 0; start < n; ++start) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(start)] = 0;
    std::deque<int> frontier{start};
    while (!frontier.empty()) {
      const int at = frontier.front();
      frontier.pop_front();
      for (const int next : view.adjacency[static_cast<std::size_t>(at)]) {
        if (dist[static_cast<std::size_t>(next)] < 0) {
          dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(at)] + 1;
          frontier.push_back(next);
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      if (j != start && dist[static_cast<std::size_t>(j)] > 0) {
        total += dist[static_cast<std::size_t>(j)];
      }
    }
  }
  return total;
}

[[noreturn]] void undefined(MetricKind kind, const std::string& why) {
  throw UndefinedMetricError(to_string(kind) + " undefined: " + why);
}

}  // namespace

double evaluate_metric(MetricKind kind, const BeliefGraph& ekg) {
  switch (kind) {
    case MetricKind::Sparseness: {
      const InstanceView view = instance_view(ekg);
      if (view.nodes.empty()) undefined(kind, "no instance nodes");
      const double v = static_cast<double>(view.nodes.size());
      return static_cast<double>(view.edge_count) / (v * v);
    }
    case MetricKind::AverageDegree: {
      const InstanceView view = instance_view(ekg);
      if (view.nodes.empty()) undefined(kind, "no instance nodes");
      return 2.0 * static_cast<double>(view.edge_count) /
             static_cast<double>(view.nodes.size());
    }
    case MetricKind::ShortestPath: {
      const InstanceView view = instance_view(ekg);
      if (view.nodes.empty()) undefined(kind, "no instance nodes");
      return reachable_distance_sum(view) / static_cast<double>(view.nodes.size());
    }
    case MetricKind::TotalTriples:
      return static_cast<double>(ekg.store().size());
    case MetricKind::AveragePopulation: {
      const auto& types = ekg.ontology().types;
      if (types.empty()) undefined(kind, "ontology has no types");
      double population = 0;
      for (const auto& type : types) {
        const auto rows = ekg.store().match(
            {TriplePattern{var("?e"), iri(std::string(vocab::kRdfType)), iri(type),
                           iri(std::string(vocab::kInstancesGraph)), Subgraph::Instances}});
        population += static_cast<double>(rows.size());
      }
      return population / static_cast<double>(types.size());
    }
    case MetricKind::RatioClaimsToTriples: {
      const double total = static_cast<double>(ekg.store().size());
      if (total == 0) undefined(kind, "empty store");
      return static_cast<double>(ekg.claim_iris().size()) / total;
    }
    case MetricKind::RatioPerspectivesToClaims: {
      const double claims = static_cast<double>(ekg.claim_iris().size());
      if (claims == 0) undefined(kind, "no claims");
      return static_cast<double>(ekg.attribution_iris().size()) / claims;
    }
    case MetricKind::RatioConflictsToClaims: {
      const double claims = static_cast<double>(ekg.claim_iris().size());
      if (claims == 0) undefined(kind, "no claims");
      return static_cast<double>(ekg.conflict_count()) / claims;
    }
  }
  throw Error("unhandled metric");
}

double evaluate_metric_or_zero(MetricKind kind, const BeliefGraph& ekg) {
  try {
    return evaluate_metric(kind, ekg);
  } catch (const UndefinedMetricError&) {
    return 0.0;
  }
}

double reward_delta(double m_prev, double m_next) {
  if (m_prev > 0) return m_next / m_prev - 1.0;
  return m_next > 0 ? 1.0 : 0.0;
}

double reward_printed_form(double m_prev, double m_next) {
  if (m_next > 0) return m_prev / m_next - 1.0;
  return m_prev > 0 ? 1.0 : 0.0;
}

}  // namespace kgagent
