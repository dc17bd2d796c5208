// qgossip: run gossip experiments, node-count sweeps and real-vs-quantized
// comparisons from the command line.
//
//   qgossip run     [options]
//   qgossip sweep   --node-counts 10,20,30 [options]
//   qgossip compare [options]
//
// Exit codes: 0 success, 1 usage error, 2 runtime error, 3 no trial reached consensus.

#include "qgossip/config.hpp"
#include "qgossip/experiment.hpp"
#include "qgossip/io.hpp"

#include <fstream>
#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;
constexpr int exit_no_consensus = 3;

const char* const usage =
    "usage: qgossip <run|sweep|compare> [options]\n"
    "       qgossip <command> --help   for the option list\n";

bool any_converged(const qgossip::ExperimentReport& r) { return r.stats.non_converged < r.stats.n_trials; }

bool all_errored(const qgossip::ExperimentReport& r) {
  return std::all_of(r.trials.begin(), r.trials.end(), [](const auto& t) { return t.error.has_value(); });
}

int status(const qgossip::ExperimentReport& r) {
  if (all_errored(r)) {
    std::cerr << "error: " << *r.trials.front().error << '\n';
    return exit_runtime;
  }
  return any_converged(r) ? exit_ok : exit_no_consensus;
}

void print_summary(const qgossip::ExperimentReport& r) {
  qgossip::Json summary{{"config", qgossip::to_json(r.config)}, {"stats", qgossip::to_json(r.stats)}};
  std::cout << summary.dump(2) << '\n';
}

int run(const qgossip::ExperimentConfig& cfg) {
  const auto report = qgossip::run_experiment(cfg);
  if (cfg.out_dir.empty()) std::cout << qgossip::to_json(report).dump(2) << '\n';
  else print_summary(report);
  return status(report);
}

int sweep(const qgossip::ExperimentConfig& cfg) {
  if (cfg.node_counts.empty()) throw qgossip::UsageError("--node-counts", "required for sweep");
  const auto reports = qgossip::run_sweep_reports(cfg, cfg.node_counts);
  const std::string csv = qgossip::sweep_csv(reports);
  if (!cfg.out_dir.empty()) {
    std::ofstream(cfg.out_dir / "sweep.csv", std::ios::binary) << csv;
  }
  std::cout << csv;
  for (const auto& r : reports)
    if (any_converged(r)) return exit_ok;
  return exit_no_consensus;
}

int compare(qgossip::ExperimentConfig cfg) {
  if (cfg.record_every != 1) throw qgossip::UsageError("--record-every", "compare records every iteration");
  cfg.run_to_cap = true;

  auto real_cfg = cfg;
  real_cfg.mode = qgossip::ValueMode::real;
  auto quantized_cfg = cfg;
  quantized_cfg.mode = qgossip::ValueMode::quantized;
  quantized_cfg.tolerance.reset();
  if (!cfg.out_dir.empty()) {
    real_cfg.out_dir = cfg.out_dir / "real";
    quantized_cfg.out_dir = cfg.out_dir / "quantized";
  }

  const auto real = qgossip::run_experiment(real_cfg);
  const auto quantized = qgossip::run_experiment(quantized_cfg);
  const std::string csv = qgossip::emit_compare(real, quantized);
  if (cfg.out_dir.empty()) {
    std::cout << csv;
  } else {
    std::ofstream(cfg.out_dir / "compare.csv", std::ios::binary) << csv;
    print_summary(quantized);
  }
  return status(quantized);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << usage;
    return exit_usage;
  }
  const std::string command = argv[1];
  const std::vector<std::string> args(argv + 2, argv + argc);

  try {
    if (command == "-h" || command == "--help") {
      std::cout << usage;
      return exit_ok;
    }
    if (command != "run" && command != "sweep" && command != "compare") {
      std::cerr << "unknown command '" << command << "'\n" << usage;
      return exit_usage;
    }
    auto cfg = qgossip::parse_config(args);
    if (command != "sweep" && !cfg.node_counts.empty())
      throw qgossip::UsageError("--node-counts", "only applies to sweep");
    if (command == "run") return run(cfg);
    if (command == "sweep") return sweep(cfg);
    return compare(cfg);
  } catch (const qgossip::HelpRequested& h) {
    std::cout << h.what() << '\n';
    return exit_ok;
  } catch (const qgossip::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}
