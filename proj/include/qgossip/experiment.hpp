#pragma once

#include "qgossip/analysis.hpp"
#include "qgossip/config.hpp"
#include "qgossip/simulation.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgossip {

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<Iteration> consensus_iteration;
  std::optional<Iteration> mse_floor_iteration;
  /// Set when the trial failed (e.g. disconnected topology); trace is then empty.
  std::optional<std::string> error;
  Trace trace;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  ConvergenceStats stats;
  /// Relative to config.out_dir.
  std::vector<std::filesystem::path> files;
};

/// Seed of trial k is cfg.seed + k.
std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial);

/// Simulation inputs for one trial: topology (resampled for rgg), initial
/// values and gossip stream, all derived from the trial seed.
SimulationConfig make_trial_config(const ExperimentConfig& cfg, std::size_t trial);

/// Runs every trial, aggregates, and writes traces plus report.json when
/// cfg.out_dir is set. Failed trials are recorded, not fatal.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

Json to_json(const ExperimentReport& report);

/// One experiment per node count. Entry k is seeded with
/// tmpl.seed + k * tmpl.trials so repeated counts get distinct trials.
std::vector<ExperimentReport> run_sweep_reports(const ExperimentConfig& tmpl, std::span<const std::size_t> node_counts);

std::string sweep_csv(std::span<const ExperimentReport> reports);

/// Sweep CSV text; also written to out_dir/sweep.csv when set.
std::string run_sweep(const ExperimentConfig& tmpl, std::span<const std::size_t> node_counts);

/// Per-iteration `iteration,mse_real,mse_quantized`, averaged over trials.
/// Traces ending early are padded with their last MSE and flagged with a
/// leading `#` comment line. Throws ConfigMismatch unless the two configs
/// differ only in value mode and tolerance and record every iteration.
std::string emit_compare(const ExperimentReport& real_report, const ExperimentReport& quantized_report);

}  // namespace qgossip
