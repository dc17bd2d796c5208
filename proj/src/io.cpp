#include "qgossip/io.hpp"

#include <cstdio>
#include <ostream>

namespace qgossip {

namespace {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const Graph& g) {
  Json j;
  j["n"] = g.size();
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  if (const auto& p = g.positions()) {
    Json pos = Json::array();
    for (Eigen::Index i = 0; i < p->rows(); ++i) pos.push_back({(*p)(i, 0), (*p)(i, 1)});
    j["positions"] = std::move(pos);
  } else {
    j["positions"] = nullptr;
  }
  return j;
}

Json to_json(const IterationMetrics& m) {
  return Json{{"iteration", m.iteration}, {"mse", m.mse},   {"spread", m.spread},
              {"min", m.min},             {"max", m.max},   {"at_consensus", m.at_consensus}};
}

Json to_json(const Trace& t) {
  Json j;
  j["consensus_iteration"] = optional_json(t.consensus_iteration);
  j["first_change_iteration"] = optional_json(t.first_change_iteration);
  j["initial_mean"] = t.initial_mean;
  Json metrics = Json::array();
  for (const auto& m : t.metrics) metrics.push_back(to_json(m));
  j["metrics"] = std::move(metrics);
  if (!t.snapshots.empty()) {
    Json states = Json::array();
    for (const auto& s : t.snapshots)
      states.push_back({{"iteration", s.iteration}, {"values", std::vector<double>(s.values.begin(), s.values.end())}});
    j["states"] = std::move(states);
  }
  return j;
}

Json to_json(const ConvergenceStats& s) {
  Json iters = Json::array();
  for (const auto& c : s.consensus_iterations) iters.push_back(optional_json(c));
  return Json{{"n_trials", s.n_trials},
              {"consensus_iterations", std::move(iters)},
              {"mean", optional_json(s.mean)},
              {"median", optional_json(s.median)},
              {"p05", optional_json(s.p05)},
              {"p95", optional_json(s.p95)},
              {"non_converged", s.non_converged}};
}

Json to_json(const TbarEstimate& t) {
  return Json{{"value", t.value}, {"stderr", t.std_error}, {"n_samples", t.n_samples}};
}

void write_metrics_csv(std::ostream& os, std::span<const IterationMetrics> metrics) {
  os << metrics_csv_header << '\n';
  for (const auto& m : metrics) {
    os << m.iteration << ',' << format_double(m.mse) << ',' << format_double(m.spread) << ','
       << format_double(m.min) << ',' << format_double(m.max) << ',' << (m.at_consensus ? 1 : 0) << '\n';
  }
}

void write_states_csv(std::ostream& os, std::span<const NodeStates<double>> snapshots) {
  os << states_csv_header << '\n';
  for (const auto& s : snapshots)
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
      os << s.iteration << ',' << i << ',' << format_double(s.values[i]) << '\n';
}

}  // namespace qgossip
