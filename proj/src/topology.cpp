#include "qgossip/topology.hpp"

#include "qgossip/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qgossip {

namespace {

std::string edge_text(Edge e) {
  return "{" + std::to_string(e.u) + ", " + std::to_string(e.v) + "}";
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

Edge make_edge(std::size_t i, std::size_t j) {
  if (i == j) throw InvalidEdge("self-loop on vertex " + std::to_string(i));
  return i < j ? Edge{i, j} : Edge{j, i};
}

bool is_connected(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) return false;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::size_t components = n;
  for (const Edge& e : edges) {
    const auto a = find_root(parent, e.u);
    const auto b = find_root(parent, e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::optional<Positions> positions)
    : n_(n), edges_(std::move(edges)), positions_(std::move(positions)) {
  if (n_ < 2) throw InvalidArgument("graph needs at least 2 vertices, got " + std::to_string(n_));
  for (Edge& e : edges_) {
    if (e.u >= n_ || e.v >= n_) throw InvalidEdge("edge " + edge_text(e) + " out of range");
    e = make_edge(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end())
    throw InvalidEdge("duplicate edge " + edge_text(*dup));
  if (positions_ && static_cast<std::size_t>(positions_->rows()) != n_)
    throw InvalidArgument("position count does not match vertex count");
  if (!is_connected(n_, edges_)) throw DisconnectedTopology(1);
}

std::size_t Graph::degree(std::size_t vertex) const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [vertex](const Edge& e) { return e.u == vertex || e.v == vertex; }));
}

bool Graph::has_edge(Edge e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

Graph build_complete(std::size_t n) {
  if (n < 2) throw InvalidArgument("complete graph needs n >= 2, got " + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

Graph build_ring(std::size_t n) {
  // n = 2 would list {0,1} twice.
  if (n < 3) throw InvalidArgument("ring needs n >= 3, got " + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) edges.push_back(make_edge(i, (i + 1) % n));
  return Graph(n, std::move(edges));
}

std::vector<Edge> geometric_edges(const Positions& positions, double radius) {
  std::vector<Edge> edges;
  const auto n = static_cast<std::size_t>(positions.rows());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((positions.row(i) - positions.row(j)).norm() < radius) edges.push_back({i, j});
  return edges;
}

Graph build_rgg(const RggParams& params, const PositionSource& source) {
  if (params.n < 2) throw InvalidArgument("rgg needs n >= 2");
  if (!(params.box_side > 0.0)) throw InvalidArgument("rgg box side must be positive");
  if (!(params.radius > 0.0)) throw InvalidArgument("rgg radius must be positive");
  if (params.max_attempts < 1) throw InvalidArgument("rgg max_attempts must be >= 1");

  for (std::size_t attempt = 1; attempt <= params.max_attempts; ++attempt) {
    Positions positions = source(attempt);
    if (static_cast<std::size_t>(positions.rows()) != params.n)
      throw InvalidArgument("position source returned wrong vertex count");
    auto edges = geometric_edges(positions, params.radius);
    if (is_connected(params.n, edges)) return Graph(params.n, std::move(edges), std::move(positions));
  }
  throw DisconnectedTopology(params.max_attempts);
}

Graph build_rgg(const RggParams& params, Rng& rng) {
  return build_rgg(params, [&](std::size_t) {
    Positions p(static_cast<Eigen::Index>(params.n), 2);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      p(i, 0) = rng.uniform(0.0, params.box_side);
      p(i, 1) = rng.uniform(0.0, params.box_side);
    }
    return p;
  });
}

EdgeDistribution::EdgeDistribution(std::vector<Edge> edges, std::vector<double> probabilities)
    : edges_(std::move(edges)), probabilities_(std::move(probabilities)) {
  if (edges_.empty()) throw InvalidArgument("edge distribution needs a non-empty support");
  if (edges_.size() != probabilities_.size())
    throw InvalidArgument("edge and probability counts differ");
  double total = 0.0;
  cumulative_.reserve(probabilities_.size());
  for (double p : probabilities_) {
    if (!(p > 0.0)) throw InvalidArgument("edge probabilities must be positive");
    total += p;
    cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("edge probabilities must sum to 1");
  cumulative_.back() = 1.0;
  uniform_ = std::all_of(probabilities_.begin(), probabilities_.end(),
                         [&](double p) { return p == probabilities_.front(); });
}

double EdgeDistribution::probability(Edge e) const {
  for (std::size_t k = 0; k < edges_.size(); ++k)
    if (edges_[k] == e) return probabilities_[k];
  return 0.0;
}

Edge EdgeDistribution::sample(Rng& rng) const {
  if (uniform_) return edges_[rng.index(edges_.size())];
  const double x = rng.uniform01();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
  return edges_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cumulative_.begin(), static_cast<std::ptrdiff_t>(edges_.size()) - 1))];
}

EdgeDistribution uniform_edge_distribution(const Graph& g) {
  const auto count = g.edges().size();
  return EdgeDistribution(g.edges(), std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

}  // namespace qgossip
