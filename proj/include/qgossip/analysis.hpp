#pragma once

#include "qgossip/gossip.hpp"
#include "qgossip/quantizer.hpp"
#include "qgossip/random.hpp"
#include "qgossip/topology.hpp"
#include "qgossip/types.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qgossip {

/// First snapshot iteration at which ||t(l) - mean(t(0)) 1||_2 / ||t(0)||_2 <= tau.
/// Snapshots must start at the initial state.
std::optional<Iteration> epsilon_averaging_time(std::span<const NodeStates<double>> snapshots, double tau);

struct TbarEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

struct TbarOptions {
  std::size_t repetitions = 100;
  bool swap_enabled = true;
  /// Safety cap on a single first-change search.
  Iteration max_steps = 10'000'000;
};

/// Iterations until the first value-changing gossip step from `init`.
Iteration first_nontrivial_time(const EdgeDistribution& d, const Quantizer& q, const VectorXd& init, bool swap_enabled,
                                Rng& rng, Iteration max_steps);

/// Worst case, over the given initializations, of the expected first
/// non-trivial averaging time, each expectation estimated from
/// `opts.repetitions` runs. The std_error belongs to the maximizing cell.
TbarEstimate estimate_tbar(const Graph& g, const Quantizer& q, std::span<const VectorXd> inits, Rng& rng,
                           const TbarOptions& opts = {});

/// Same, over `n_inits` uniform initializations in [m, M]. Draws whose nodes
/// all share one quantization level are redrawn.
TbarEstimate estimate_tbar(const Graph& g, const Quantizer& q, std::size_t n_inits, Rng& rng,
                           const TbarOptions& opts = {});

/// Upper bound (M - m)^2 * n * tbar / 8 on expected consensus iterations, with
/// the range given in quantization steps.
double convergence_bound(std::size_t n, double range_min, double range_max, const TbarEstimate& tbar);

struct ConvergenceStats {
  std::size_t n_trials = 0;
  std::vector<std::optional<Iteration>> consensus_iterations;
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> p05;
  std::optional<double> p95;
  std::size_t non_converged = 0;
};

/// Nearest-rank percentiles over the converged trials; `none` entries are
/// counted as non-converged.
ConvergenceStats aggregate_consensus_stats(std::span<const std::optional<Iteration>> results);

/// Nearest-rank percentile of a non-empty sorted sample, p in [0, 100].
double nearest_rank(std::span<const double> sorted, double p);

/// Synchronization accuracy for a given number of steps at a fixed per-step latency.
template <typename Rep, typename Period>
std::chrono::duration<Rep, Period> sync_accuracy(std::uint64_t iterations_to_mse_floor,
                                                 std::chrono::duration<Rep, Period> per_step_latency) {
  if (iterations_to_mse_floor == 0) throw InvalidArgument("iteration count must be positive");
  if (!(per_step_latency.count() > Rep(0))) throw InvalidArgument("per-step latency must be positive");
  return per_step_latency * static_cast<Rep>(iterations_to_mse_floor);
}

struct PlateauOptions {
  std::size_t window = 20;
  double rel_tol = 0.05;
};

/// First iteration l such that max/min of MSE over [l, l + window) stays
/// below 1 + rel_tol. An all-zero window counts as a plateau.
std::optional<Iteration> mse_floor_iteration(std::span<const IterationMetrics> metrics,
                                             const PlateauOptions& opts = {});

}  // namespace qgossip
