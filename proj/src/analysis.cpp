#include "qgossip/analysis.hpp"

#include "qgossip/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qgossip {

std::optional<Iteration> epsilon_averaging_time(std::span<const NodeStates<double>> snapshots, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("tau must lie in (0, 1)");
  if (snapshots.empty()) throw InsufficientData("no snapshots");
  const VectorXd& initial = snapshots.front().values;
  const double initial_norm = initial.norm();
  if (initial_norm == 0.0) throw InvalidArgument("initial state has zero norm");
  const double average = initial.mean();
  for (const auto& s : snapshots) {
    if ((s.values.array() - average).matrix().norm() / initial_norm <= tau) return s.iteration;
  }
  return std::nullopt;
}

Iteration first_nontrivial_time(const EdgeDistribution& d, const Quantizer& q, const VectorXd& init, bool swap_enabled,
                                Rng& rng, Iteration max_steps) {
  NodeStates<double> state{init, 0};
  const std::optional<Quantizer> mode{q};
  while (state.iteration < max_steps) {
    if (gossip_step(state, d.sample(rng), mode, swap_enabled).values_changed) return state.iteration;
  }
  throw InvalidArgument("no value-changing step within " + std::to_string(max_steps) + " iterations");
}

namespace {

bool single_level(const Quantizer& q, const VectorXd& values) {
  const auto first = q.level(values[0]);
  return std::all_of(values.begin(), values.end(), [&](double x) { return q.level(x) == first; });
}

}  // namespace

TbarEstimate estimate_tbar(const Graph& g, const Quantizer& q, std::span<const VectorXd> inits, Rng& rng,
                           const TbarOptions& opts) {
  if (inits.empty()) throw InvalidArgument("estimate_tbar needs at least one initialization");
  if (opts.repetitions < 1) throw InvalidArgument("estimate_tbar needs at least one repetition");
  const auto dist = uniform_edge_distribution(g);
  const std::uint64_t base = rng.next();

  TbarEstimate best;
  bool have = false;
  for (std::size_t k = 0; k < inits.size(); ++k) {
    const VectorXd& init = inits[k];
    if (static_cast<std::size_t>(init.size()) != g.size())
      throw InvalidArgument("initialization length does not match the graph");
    if (single_level(q, init))
      throw InvalidArgument("initialization " + std::to_string(k) + " has every node on one quantization level");

    // One stream per initialization so the result does not depend on evaluation order.
    Rng stream(derive_seed(base, k));
    std::vector<double> samples(opts.repetitions);
    for (auto& s : samples)
      s = static_cast<double>(first_nontrivial_time(dist, q, init, opts.swap_enabled, stream, opts.max_steps));

    const double count = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / count;
    double err = 0.0;
    if (samples.size() > 1) {
      double ss = 0.0;
      for (double s : samples) ss += (s - mean) * (s - mean);
      err = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    }
    if (!have || mean > best.value) {
      best.value = mean;
      best.std_error = err;
      have = true;
    }
  }
  best.n_samples = inits.size() * opts.repetitions;
  return best;
}

TbarEstimate estimate_tbar(const Graph& g, const Quantizer& q, std::size_t n_inits, Rng& rng,
                           const TbarOptions& opts) {
  if (n_inits < 1) throw InvalidArgument("estimate_tbar needs n_inits >= 1");
  std::vector<VectorXd> inits;
  inits.reserve(n_inits);
  while (inits.size() < n_inits) {
    VectorXd v(static_cast<Eigen::Index>(g.size()));
    for (auto& x : v) x = rng.uniform(q.min(), q.max());
    if (!single_level(q, v)) inits.push_back(std::move(v));
  }
  return estimate_tbar(g, q, std::span<const VectorXd>(inits), rng, opts);
}

double convergence_bound(std::size_t n, double range_min, double range_max, const TbarEstimate& tbar) {
  if (n < 1) throw InvalidArgument("vertex count must be positive");
  if (!(range_max > range_min)) throw InvalidArgument("range needs max > min");
  if (!(tbar.value >= 1.0)) throw InvalidArgument("tbar must be at least 1");
  const double span = range_max - range_min;
  return span * span * static_cast<double>(n) * tbar.value / 8.0;
}

double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("percentile of an empty sample");
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

ConvergenceStats aggregate_consensus_stats(std::span<const std::optional<Iteration>> results) {
  if (results.empty()) throw InvalidArgument("no trial results to aggregate");
  ConvergenceStats stats;
  stats.n_trials = results.size();
  stats.consensus_iterations.assign(results.begin(), results.end());

  std::vector<double> converged;
  for (const auto& r : results) {
    if (r) converged.push_back(static_cast<double>(*r));
    else ++stats.non_converged;
  }
  if (converged.empty()) return stats;

  std::sort(converged.begin(), converged.end());
  // Summing in sorted order keeps the mean independent of input order.
  stats.mean = std::accumulate(converged.begin(), converged.end(), 0.0) / static_cast<double>(converged.size());
  stats.median = nearest_rank(converged, 50.0);
  stats.p05 = nearest_rank(converged, 5.0);
  stats.p95 = nearest_rank(converged, 95.0);
  return stats;
}

std::optional<Iteration> mse_floor_iteration(std::span<const IterationMetrics> metrics, const PlateauOptions& opts) {
  if (opts.window < 2) throw InvalidArgument("plateau window must be >= 2");
  if (!(opts.rel_tol > 0.0)) throw InvalidArgument("plateau rel_tol must be positive");
  if (metrics.size() < opts.window)
    throw InsufficientData("trace has " + std::to_string(metrics.size()) + " entries, window needs " +
                           std::to_string(opts.window));

  for (std::size_t start = 0; start + opts.window <= metrics.size(); ++start) {
    const auto window = metrics.subspan(start, opts.window);
    const auto [lo, hi] = std::minmax_element(window.begin(), window.end(),
                                              [](const auto& a, const auto& b) { return a.mse < b.mse; });
    if (hi->mse == 0.0) return metrics[start].iteration;
    if (lo->mse > 0.0 && hi->mse < (1.0 + opts.rel_tol) * lo->mse) return metrics[start].iteration;
  }
  return std::nullopt;
}

}  // namespace qgossip
