#pragma once

#include "qgossip/analysis.hpp"
#include "qgossip/gossip.hpp"
#include "qgossip/simulation.hpp"
#include "qgossip/topology.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace qgossip {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view metrics_csv_header = "iteration,mse,spread,min,max,at_consensus";
inline constexpr std::string_view states_csv_header = "iteration,node_id,value";
inline constexpr std::string_view sweep_csv_header =
    "n_nodes,topology,mean_iters,median_iters,p05,p95,non_converged";
inline constexpr std::string_view compare_csv_header = "iteration,mse_real,mse_quantized";

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double x);

/// {"n": ..., "edges": [[i, j], ...], "positions": [[x, y], ...] | null}
Json to_json(const Graph& g);
Json to_json(const IterationMetrics& m);
Json to_json(const Trace& t);
Json to_json(const ConvergenceStats& s);
Json to_json(const TbarEstimate& t);

void write_metrics_csv(std::ostream& os, std::span<const IterationMetrics> metrics);
void write_states_csv(std::ostream& os, std::span<const NodeStates<double>> snapshots);

}  // namespace qgossip
