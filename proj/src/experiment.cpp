#include "qgossip/experiment.hpp"

#include "qgossip/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace qgossip {

namespace {

enum Stream : std::uint64_t { topology_stream = 0, init_stream = 1, gossip_stream = 2 };

Graph build_topology(const TopologySpec& spec, Rng& rng) {
  switch (spec.kind) {
    case TopologyKind::complete: return build_complete(spec.n);
    case TopologyKind::ring: return build_ring(spec.n);
    case TopologyKind::rgg:
      return build_rgg(RggParams{spec.n, spec.box_side, spec.radius, spec.max_attempts}, rng);
  }
  throw InvalidArgument("unknown topology");
}

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t k) {
  TrialResult r;
  r.trial = k;
  r.seed = trial_seed(cfg, k);
  try {
    r.trace = run_simulation(make_trial_config(cfg, k));
    r.consensus_iteration = r.trace.consensus_iteration;
    const PlateauOptions plateau;
    if (cfg.record_every == 1 && r.trace.metrics.size() >= plateau.window)
      r.mse_floor_iteration = mse_floor_iteration(r.trace.metrics, plateau);
  } catch (const Error& e) {
    r.error = e.what();
    r.trace = Trace{};
  }
  return r;
}

std::string trial_stem(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trial_%04zu", k);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string csv_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

}  // namespace

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial) { return cfg.seed + trial; }

SimulationConfig make_trial_config(const ExperimentConfig& cfg, std::size_t trial) {
  const std::uint64_t seed = trial_seed(cfg, trial);
  Rng topo_rng(derive_seed(seed, topology_stream));
  Graph graph = build_topology(cfg.topology, topo_rng);

  VectorXd init;
  if (cfg.init_values) {
    init = Eigen::Map<const VectorXd>(cfg.init_values->data(), static_cast<Eigen::Index>(cfg.init_values->size()));
  } else {
    Rng init_rng(derive_seed(seed, init_stream));
    init = uniform_initial_values(cfg.topology.n, cfg.range_min, cfg.range_max, init_rng);
  }

  SimulationConfig sc{std::move(graph)};
  if (cfg.mode == ValueMode::quantized) sc.quantizer = cfg.quantizer();
  else sc.tolerance = cfg.consensus_tolerance();
  sc.swap_enabled = cfg.swap_enabled;
  sc.initial_values = std::move(init);
  sc.seed = derive_seed(seed, gossip_stream);
  sc.max_iterations = cfg.max_iterations;
  sc.record = RecordPolicy{cfg.record_every, cfg.full_state};
  sc.stop_at_consensus = !cfg.run_to_cap;
  return sc;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentReport report;
  report.config = cfg;
  report.trials.resize(cfg.trials);

  // Trials share nothing; results land in their own slot, so scheduling
  // order cannot affect the report.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cfg.trials; k = next++) report.trials[k] = run_trial(cfg, k);
  };
  const auto workers = std::min<std::size_t>(cfg.threads, cfg.trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<std::optional<Iteration>> iterations;
  iterations.reserve(cfg.trials);
  for (const auto& t : report.trials) iterations.push_back(t.consensus_iteration);
  report.stats = aggregate_consensus_stats(iterations);

  if (cfg.out_dir.empty()) return report;

  std::filesystem::create_directories(cfg.out_dir);
  const bool csv = cfg.format == OutputFormat::csv;
  for (const auto& t : report.trials) {
    if (t.error) continue;
    const std::string stem = trial_stem(t.trial);
    if (csv) {
      std::ostringstream os;
      write_metrics_csv(os, t.trace.metrics);
      report.files.emplace_back(stem + "_metrics.csv");
      write_file(cfg.out_dir / report.files.back(), os.str());
      if (cfg.full_state) {
        std::ostringstream ss;
        write_states_csv(ss, t.trace.snapshots);
        report.files.emplace_back(stem + "_states.csv");
        write_file(cfg.out_dir / report.files.back(), ss.str());
      }
    } else {
      report.files.emplace_back(stem + "_trace.json");
      write_file(cfg.out_dir / report.files.back(), to_json(t.trace).dump(1) + "\n");
    }
    if (cfg.topology.kind == TopologyKind::rgg) {
      report.files.emplace_back(stem + "_graph.json");
      write_file(cfg.out_dir / report.files.back(), to_json(make_trial_config(cfg, t.trial).graph).dump() + "\n");
    }
  }
  report.files.emplace_back("report.json");
  write_file(cfg.out_dir / "report.json", to_json(report).dump(2) + "\n");
  return report;
}

Json to_json(const ExperimentReport& report) {
  Json trials = Json::array();
  for (const auto& t : report.trials) {
    trials.push_back({{"trial", t.trial},
                      {"seed", t.seed},
                      {"consensus_iteration", optional_json(t.consensus_iteration)},
                      {"first_change_iteration", optional_json(t.trace.first_change_iteration)},
                      {"mse_floor_iteration", optional_json(t.mse_floor_iteration)},
                      {"error", optional_json(t.error)}});
  }
  Json files = Json::array();
  for (const auto& f : report.files)
    if (f != "report.json") files.push_back(f.generic_string());
  return Json{{"config", to_json(report.config)},
              {"trials", std::move(trials)},
              {"stats", to_json(report.stats)},
              {"files", std::move(files)}};
}

std::vector<ExperimentReport> run_sweep_reports(const ExperimentConfig& tmpl, std::span<const std::size_t> node_counts) {
  if (node_counts.empty()) throw InvalidArgument("sweep needs at least one node count");
  std::vector<ExperimentReport> reports;
  reports.reserve(node_counts.size());
  for (std::size_t k = 0; k < node_counts.size(); ++k) {
    ExperimentConfig cfg = tmpl;
    cfg.node_counts.clear();
    cfg.topology.n = node_counts[k];
    cfg.seed = tmpl.seed + k * tmpl.trials;
    if (!tmpl.out_dir.empty())
      cfg.out_dir = tmpl.out_dir / ("entry_" + std::to_string(k) + "_n" + std::to_string(node_counts[k]));
    reports.push_back(run_experiment(cfg));
  }
  return reports;
}

std::string sweep_csv(std::span<const ExperimentReport> reports) {
  std::ostringstream os;
  os << sweep_csv_header << '\n';
  for (const auto& r : reports) {
    os << r.config.topology.n << ',' << to_string(r.config.topology.kind) << ',' << csv_field(r.stats.mean) << ','
       << csv_field(r.stats.median) << ',' << csv_field(r.stats.p05) << ',' << csv_field(r.stats.p95) << ','
       << r.stats.non_converged << '\n';
  }
  return os.str();
}

std::string run_sweep(const ExperimentConfig& tmpl, std::span<const std::size_t> node_counts) {
  const auto reports = run_sweep_reports(tmpl, node_counts);
  std::string csv = sweep_csv(reports);
  if (!tmpl.out_dir.empty()) {
    std::filesystem::create_directories(tmpl.out_dir);
    write_file(tmpl.out_dir / "sweep.csv", csv);
  }
  return csv;
}

namespace {

struct MseColumn {
  std::vector<double> mean;                   // per iteration, averaged over trials
  std::optional<Iteration> padded_after;      // earliest trace end before the last row
};

MseColumn mse_column(const ExperimentReport& report, std::size_t rows) {
  MseColumn col;
  col.mean.assign(rows, 0.0);
  std::size_t used = 0;
  for (const auto& t : report.trials) {
    const auto& m = t.trace.metrics;
    if (t.error || m.empty()) continue;
    ++used;
    for (std::size_t l = 0; l < rows; ++l) col.mean[l] += l < m.size() ? m[l].mse : m.back().mse;
    if (m.size() < rows && (!col.padded_after || m.back().iteration < *col.padded_after))
      col.padded_after = m.back().iteration;
  }
  if (used == 0) throw Error("no successful trials to compare");
  for (double& v : col.mean) v /= static_cast<double>(used);
  return col;
}

std::size_t trace_rows(const ExperimentReport& report) {
  std::size_t rows = 0;
  for (const auto& t : report.trials) rows = std::max(rows, t.trace.metrics.size());
  return rows;
}

}  // namespace

std::string emit_compare(const ExperimentReport& real_report, const ExperimentReport& quantized_report) {
  if (real_report.config.mode != ValueMode::real || quantized_report.config.mode != ValueMode::quantized)
    throw ConfigMismatch("compare needs one real-mode and one quantized-mode report");
  if (real_report.config.record_every != 1 || quantized_report.config.record_every != 1)
    throw ConfigMismatch("compare needs metrics recorded every iteration");
  auto comparable = [](const ExperimentConfig& c) {
    Json j = to_json(c);
    j.erase("mode");
    j.erase("tolerance");
    return j;
  };
  if (comparable(real_report.config) != comparable(quantized_report.config))
    throw ConfigMismatch("reports differ in more than the value mode");

  const std::size_t rows = std::max(trace_rows(real_report), trace_rows(quantized_report));
  const MseColumn real = mse_column(real_report, rows);
  const MseColumn quantized = mse_column(quantized_report, rows);

  std::ostringstream os;
  if (real.padded_after)
    os << "# mse_real padded with last recorded value after iteration " << *real.padded_after << '\n';
  if (quantized.padded_after)
    os << "# mse_quantized padded with last recorded value after iteration " << *quantized.padded_after << '\n';
  os << compare_csv_header << '\n';
  for (std::size_t l = 0; l < rows; ++l)
    os << l << ',' << format_double(real.mean[l]) << ',' << format_double(quantized.mean[l]) << '\n';
  return os.str();
}

}  // namespace qgossip
