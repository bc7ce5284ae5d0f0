#pragma once

// All-pairs shortest paths over a small dense digraph. Reference oracle for
// the BFS-based path metric: O(n^3), no sharing with the production code.

#include <limits>
#include <vector>

namespace kgagent::testsupport {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// adjacency[i] lists the direct successors of node i (unit edge weights).
// Returns the n*n distance matrix; dist[i][i] == 0, unreachable == infinity.
inline std::vector<std::vector<double>> floyd_warshall(
    const std::vector<std::vector<int>>& adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, kUnreachable));
  for (std::size_t i = 0; i < n; ++i) {
    for (const int j : adjacency[i]) dist[i][static_cast<std::size_t>(j)] = 1;
    dist[i][i] = 0;  // a self-loop never beats staying put
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i][k] == kUnreachable) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (dist[i][k] + dist[k][j] < dist[i][j]) {
          dist[i][j] = dist[i][k] + dist[k][j];
        }
      }
    }
  }
  return dist;
}

// Mean over nodes of the summed finite distances to *other* nodes, the same
// aggregation the production metric uses.
inline double mean_reachable_distance(
    const std::vector<std::vector<int>>& adjacency) {
  const auto dist = floyd_warshall(adjacency);
  const std::size_t n = adjacency.size();
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && dist[i][j] != kUnreachable) total += dist[i][j];
    }
  }
  return total / static_cast<double>(n);
}

}  // namespace kgagent::testsupport
