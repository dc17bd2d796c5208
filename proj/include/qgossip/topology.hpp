#pragma once

#include "qgossip/random.hpp"
#include "qgossip/types.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qgossip {

/// Unordered vertex pair, stored with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Normalizes {i, j} so that u < v. Throws InvalidEdge when i == j.
Edge make_edge(std::size_t i, std::size_t j);

bool is_connected(std::size_t n, std::span<const Edge> edges);

/// Connected, loop-free, duplicate-free undirected graph. Immutable once
/// constructed; the constructor rejects anything violating those invariants.
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges, std::optional<Positions> positions = std::nullopt);

  std::size_t size() const noexcept { return n_; }
  /// Sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::optional<Positions>& positions() const noexcept { return positions_; }

  std::size_t degree(std::size_t vertex) const;
  bool has_edge(Edge e) const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::optional<Positions> positions_;
};

Graph build_complete(std::size_t n);
Graph build_ring(std::size_t n);

/// All pairs strictly closer than `radius`.
std::vector<Edge> geometric_edges(const Positions& positions, double radius);

struct RggParams {
  std::size_t n = 10;
  double box_side = 1.0;
  double radius = 0.8;
  std::size_t max_attempts = 100;
};

/// Supplies a fresh n x 2 position matrix for the given 1-based attempt.
using PositionSource = std::function<Positions(std::size_t attempt)>;

/// Positions i.i.d. uniform in [0, box_side]^2, resampled wholesale until the
/// geometric graph is connected. Throws DisconnectedTopology after
/// `max_attempts` failures.
Graph build_rgg(const RggParams& params, Rng& rng);
Graph build_rgg(const RggParams& params, const PositionSource& source);

/// Probability of selecting each edge for a gossip step.
class EdgeDistribution {
 public:
  EdgeDistribution(std::vector<Edge> edges, std::vector<double> probabilities);

  std::span<const Edge> support() const noexcept { return edges_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  /// Zero for pairs outside the support.
  double probability(Edge e) const;

  Edge sample(Rng& rng) const;

 private:
  std::vector<Edge> edges_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
  bool uniform_ = false;
};

EdgeDistribution uniform_edge_distribution(const Graph& g);

inline Edge sample_edge(const EdgeDistribution& d, Rng& rng) { return d.sample(rng); }

}  // namespace qgossip
