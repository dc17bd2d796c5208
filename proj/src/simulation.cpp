#include "qgossip/simulation.hpp"

#include "qgossip/errors.hpp"

#include <string>

namespace qgossip {

VectorXd uniform_initial_values(std::size_t n, double lo, double hi, Rng& rng) {
  VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

double mean_value(const VectorXd& values) {
  // Shifted by the minimum so that a constant vector yields its value exactly.
  const double lo = values.minCoeff();
  return lo + (values.array() - lo).sum() / static_cast<double>(values.size());
}

Trace run_simulation(const SimulationConfig& cfg) {
  const auto n = cfg.graph.size();
  if (static_cast<std::size_t>(cfg.initial_values.size()) != n)
    throw InvalidArgument("initial values have length " + std::to_string(cfg.initial_values.size()) +
                          ", graph has " + std::to_string(n) + " vertices");
  if (cfg.max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (cfg.record.every < 1) throw InvalidArgument("recording stride must be >= 1");
  if (cfg.quantizer) {
    for (Eigen::Index i = 0; i < cfg.initial_values.size(); ++i)
      if (!cfg.quantizer->contains(cfg.initial_values[i]))
        throw RangeError("initial value of node " + std::to_string(i) + " lies outside [" +
                         std::to_string(cfg.quantizer->min()) + ", " + std::to_string(cfg.quantizer->max()) +
                         "]");
  } else if (!cfg.tolerance) {
    throw MissingTolerance();
  }

  const auto distribution = uniform_edge_distribution(cfg.graph);
  Rng rng(cfg.seed);

  Trace trace;
  NodeStates<double> state{cfg.initial_values, 0};
  trace.initial_mean = mean_value(state.values);

  auto record = [&](const IterationMetrics& m) {
    trace.metrics.push_back(m);
    if (cfg.record.full_state) trace.snapshots.push_back(state);
  };

  IterationMetrics current = compute_metrics(state, trace.initial_mean, cfg.quantizer, cfg.tolerance);
  record(current);
  if (current.at_consensus) trace.consensus_iteration = 0;

  while (state.iteration < cfg.max_iterations && !(cfg.stop_at_consensus && trace.consensus_iteration)) {
    const StepOutcome outcome = gossip_step(state, distribution.sample(rng), cfg.quantizer, cfg.swap_enabled);
    if (outcome.values_changed && !trace.first_change_iteration)
      trace.first_change_iteration = state.iteration;

    const bool due = state.iteration % cfg.record.every == 0;
    if (due || !trace.consensus_iteration) {
      current = compute_metrics(state, trace.initial_mean, cfg.quantizer, cfg.tolerance);
      if (current.at_consensus && !trace.consensus_iteration) trace.consensus_iteration = state.iteration;
    }
    const bool last = state.iteration == cfg.max_iterations || (cfg.stop_at_consensus && trace.consensus_iteration);
    if (due || last) {
      if (current.iteration != state.iteration)
        current = compute_metrics(state, trace.initial_mean, cfg.quantizer, cfg.tolerance);
      record(current);
    }
  }

  trace.final_state = state;
  return trace;
}

}  // namespace qgossip
