#pragma once

#include "qgossip/gossip.hpp"
#include "qgossip/quantizer.hpp"
#include "qgossip/topology.hpp"
#include "qgossip/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qgossip {

struct RecordPolicy {
  /// Metrics (and snapshots, if enabled) every `every` iterations. Iteration 0
  /// and the final iteration are always recorded.
  Iteration every = 1;
  bool full_state = false;
};

struct SimulationConfig {
  explicit SimulationConfig(Graph g) : graph(std::move(g)) {}

  Graph graph;
  /// Absent selects real-valued exchange.
  std::optional<Quantizer> quantizer;
  /// Consensus tolerance for real mode.
  std::optional<double> tolerance;
  bool swap_enabled = true;
  VectorXd initial_values;
  std::uint64_t seed = 0;
  Iteration max_iterations = 100000;
  RecordPolicy record;
  /// When false the run continues to max_iterations after consensus; the
  /// consensus iteration still reports the first time it held.
  bool stop_at_consensus = true;
};

struct Trace {
  std::vector<IterationMetrics> metrics;
  std::vector<NodeStates<double>> snapshots;
  std::optional<Iteration> consensus_iteration;
  std::optional<Iteration> first_change_iteration;
  double initial_mean = 0.0;
  NodeStates<double> final_state;
};

/// Samples edges uniformly and applies gossip_step until consensus or the
/// iteration cap. Deterministic in the config, seed included.
Trace run_simulation(const SimulationConfig& cfg);

/// Arithmetic mean; exact for constant vectors.
double mean_value(const VectorXd& values);

/// i.i.d. uniform values over [lo, hi].
VectorXd uniform_initial_values(std::size_t n, double lo, double hi, Rng& rng);

}  // namespace qgossip
