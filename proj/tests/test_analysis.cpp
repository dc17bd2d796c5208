#include "qgossip/analysis.hpp"
#include "qgossip/simulation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>

using namespace qgossip;
using namespace std::chrono_literals;

namespace {

VectorXd values(std::initializer_list<double> v) {
  return VectorXd::Map(std::data(v), static_cast<Eigen::Index>(v.size()));
}

std::vector<IterationMetrics> mse_series(const std::vector<double>& mse) {
  std::vector<IterationMetrics> out;
  for (std::size_t l = 0; l < mse.size(); ++l) {
    IterationMetrics m;
    m.iteration = l;
    m.mse = mse[l];
    out.push_back(m);
  }
  return out;
}

// Plain scan, written independently of the library's window search.
std::optional<Iteration> plateau_scan(const std::vector<double>& mse, std::size_t window, double tol) {
  for (std::size_t l = 0; l + window <= mse.size(); ++l) {
    double lo = mse[l], hi = mse[l];
    for (std::size_t k = l; k < l + window; ++k) {
      lo = std::min(lo, mse[k]);
      hi = std::max(hi, mse[k]);
    }
    if (hi == 0.0 || (lo > 0.0 && hi / lo < 1.0 + tol)) return l;
  }
  return std::nullopt;
}

}  // namespace

TEST(EpsilonAveragingTime, ConstantStartIsZero) {
  const std::vector<NodeStates<double>> snaps{{values({2.0, 2.0, 2.0}), 0}, {values({2.0, 2.0, 2.0}), 1}};
  EXPECT_EQ(epsilon_averaging_time(snaps, 0.1), std::optional<Iteration>(0));
}

TEST(EpsilonAveragingTime, TwoNodeRealRun) {
  SimulationConfig cfg{build_complete(2)};
  cfg.initial_values = values({0.0, 2.0});
  cfg.tolerance = 1e-12;
  cfg.record.full_state = true;
  const auto trace = run_simulation(cfg);
  ASSERT_EQ(trace.snapshots.size(), 2u);
  EXPECT_EQ(epsilon_averaging_time(trace.snapshots, 0.1), std::optional<Iteration>(1));
}

TEST(EpsilonAveragingTime, UnreachedIsNone) {
  const std::vector<NodeStates<double>> snaps{{values({0.0, 2.0}), 0}, {values({0.0, 2.0}), 1}, {values({0.0, 2.0}), 2}};
  EXPECT_FALSE(epsilon_averaging_time(snaps, 0.5));
}

TEST(EpsilonAveragingTime, RejectsBadInput) {
  const std::vector<NodeStates<double>> snaps{{values({1.0, 2.0}), 0}};
  EXPECT_THROW(epsilon_averaging_time(snaps, 0.0), InvalidArgument);
  EXPECT_THROW(epsilon_averaging_time(snaps, 1.0), InvalidArgument);
  const std::vector<NodeStates<double>> zero{{values({0.0, 0.0}), 0}};
  EXPECT_THROW(epsilon_averaging_time(zero, 0.5), InvalidArgument);
}

TEST(EstimateTbar, SingleEdgeIsOne) {
  const std::vector<VectorXd> inits{values({0.0, 2.0}), values({1.0, 2.0})};
  Rng rng(1);
  const auto t = estimate_tbar(build_complete(2), Quantizer(2, 0.0, 3.0), std::span<const VectorXd>(inits), rng);
  EXPECT_EQ(t.value, 1.0);
  EXPECT_EQ(t.std_error, 0.0);
  EXPECT_EQ(t.n_samples, 200u);
}

TEST(EstimateTbar, AllDistinctLevelsIsOne) {
  const std::vector<VectorXd> inits{VectorXd::LinSpaced(6, 0.0, 5.0)};
  Rng rng(2);
  const auto t = estimate_tbar(build_ring(6), Quantizer(3, 0.0, 7.0), std::span<const VectorXd>(inits), rng);
  EXPECT_EQ(t.value, 1.0);
}

TEST(EstimateTbar, OneOddNodeFollowsGeometricLaw) {
  // E[T1] = 1 / p with p the fraction of edges touching the odd node.
  struct Case {
    Graph graph;
    VectorXd init;
    double p;
  };
  VectorXd ring_init = VectorXd::Zero(5);
  ring_init[2] = 1.0;
  const std::vector<Case> cases{{build_complete(3), values({0.0, 0.0, 1.0}), 2.0 / 3.0},
                                {build_ring(5), ring_init, 2.0 / 5.0},
                                {build_complete(4), values({3.0, 3.0, 3.0, 5.0}), 3.0 / 6.0}};
  for (const auto& c : cases) {
    // Truncated series sum_k k (1-p)^(k-1) p.
    double oracle = 0.0;
    for (int k = 1; k < 2000; ++k) oracle += k * std::pow(1.0 - c.p, k - 1) * c.p;
    const std::vector<VectorXd> inits{c.init};
    Rng rng(3);
    TbarOptions opts;
    opts.repetitions = 20000;
    const auto t = estimate_tbar(c.graph, Quantizer(3, 0.0, 7.0), std::span<const VectorXd>(inits), rng, opts);
    EXPECT_NEAR(t.value, oracle, 4.0 * t.std_error);
    EXPECT_GT(t.std_error, 0.0);
  }
}

TEST(EstimateTbar, MaximumOverInitializations) {
  const std::vector<VectorXd> inits{values({0.0, 1.0, 2.0}), values({0.0, 0.0, 1.0})};
  Rng rng(4);
  TbarOptions opts;
  opts.repetitions = 4000;
  const auto t = estimate_tbar(build_complete(3), Quantizer(3, 0.0, 7.0), std::span<const VectorXd>(inits), rng, opts);
  EXPECT_NEAR(t.value, 1.5, 4.0 * t.std_error);
}

TEST(EstimateTbar, BoundedByExpectedConsensusTime) {
  // {0, 0, 3} with unit step. The first averaging step gives {1.5, 0, 1.5}, still
  // one full step from the mean, and a second one settles it: E[T_con] = 1.5 + 1.5.
  const Quantizer q(3, 0.0, 7.0);
  const std::vector<VectorXd> inits{values({0.0, 0.0, 3.0})};
  Rng rng(8);
  TbarOptions opts;
  opts.repetitions = 10000;
  const auto t = estimate_tbar(build_complete(3), q, std::span<const VectorXd>(inits), rng, opts);

  constexpr int trials = 10000;
  double total = 0.0, total_sq = 0.0;
  for (int k = 0; k < trials; ++k) {
    SimulationConfig cfg{build_complete(3)};
    cfg.quantizer = q;
    cfg.initial_values = inits[0];
    cfg.seed = static_cast<std::uint64_t>(k);
    cfg.record.every = 1000;
    const auto trace = run_simulation(cfg);
    ASSERT_TRUE(trace.consensus_iteration);
    const double x = static_cast<double>(*trace.consensus_iteration);
    total += x;
    total_sq += x * x;
  }
  const double mean = total / trials;
  const double se = std::sqrt((total_sq / trials - mean * mean) / trials);
  EXPECT_NEAR(mean, 3.0, 4.0 * se);
  EXPECT_NEAR(t.value, 1.5, 4.0 * t.std_error);
  EXPECT_LE(t.value, mean + 3.0 * std::hypot(se, t.std_error));
}

TEST(EstimateTbar, RejectsSingleLevelInitialization) {
  const std::vector<VectorXd> inits{values({2.1, 2.2, 1.9})};
  Rng rng(5);
  EXPECT_THROW(estimate_tbar(build_complete(3), Quantizer(3, 0.0, 7.0), std::span<const VectorXd>(inits), rng),
               InvalidArgument);
}

TEST(EstimateTbar, RandomInitializationsDeterministic) {
  const Quantizer q(2, 0.0, 1.0);
  Rng a(6), b(6);
  const auto ta = estimate_tbar(build_ring(8), q, 25, a);
  const auto tb = estimate_tbar(build_ring(8), q, 25, b);
  EXPECT_EQ(ta.value, tb.value);
  EXPECT_EQ(ta.std_error, tb.std_error);
  EXPECT_GE(ta.value, 1.0);
  EXPECT_EQ(ta.n_samples, 2500u);
}

TEST(ConvergenceBound, Examples) {
  EXPECT_EQ(convergence_bound(10, 0.0, 4.0, TbarEstimate{1.0, 0.0, 1}), 20.0);
  EXPECT_EQ(convergence_bound(2, 0.0, 2.0, TbarEstimate{1.0, 0.0, 1}), 1.0);
  const TbarEstimate t{2.5, 0.1, 100};
  EXPECT_DOUBLE_EQ(convergence_bound(14, 3.0, 10.0, t), 2.0 * convergence_bound(7, 3.0, 10.0, t));
}

TEST(ConvergenceBound, RejectsBadInput) {
  const TbarEstimate one{1.0, 0.0, 1};
  EXPECT_THROW(convergence_bound(0, 0.0, 1.0, one), InvalidArgument);
  EXPECT_THROW(convergence_bound(3, 1.0, 1.0, one), InvalidArgument);
  EXPECT_THROW(convergence_bound(3, 0.0, 1.0, TbarEstimate{0.5, 0.0, 1}), InvalidArgument);
}

TEST(AggregateStats, Examples) {
  using O = std::optional<Iteration>;
  const std::vector<O> a{10, 20, 30};
  const auto s = aggregate_consensus_stats(a);
  EXPECT_EQ(s.mean, 20.0);
  EXPECT_EQ(s.median, 20.0);
  EXPECT_EQ(s.non_converged, 0u);
  EXPECT_EQ(s.n_trials, 3u);

  const std::vector<O> b{5, std::nullopt, 15};
  const auto t = aggregate_consensus_stats(b);
  EXPECT_EQ(t.mean, 10.0);
  EXPECT_EQ(t.non_converged, 1u);
  EXPECT_EQ(t.consensus_iterations.size(), 3u);

  const std::vector<O> c{7};
  const auto u = aggregate_consensus_stats(c);
  EXPECT_EQ(u.mean, 7.0);
  EXPECT_EQ(u.median, 7.0);
  EXPECT_EQ(u.p05, 7.0);
  EXPECT_EQ(u.p95, 7.0);
}

TEST(AggregateStats, NearestRankPercentiles) {
  std::vector<std::optional<Iteration>> r;
  for (Iteration k = 1; k <= 20; ++k) r.push_back(k);
  const auto s = aggregate_consensus_stats(r);
  EXPECT_EQ(s.p05, 1.0);   // ceil(0.05 * 20) = 1
  EXPECT_EQ(s.median, 10.0);
  EXPECT_EQ(s.p95, 19.0);  // ceil(0.95 * 20) = 19
}

TEST(AggregateStats, NothingConverged) {
  const std::vector<std::optional<Iteration>> r(4);
  const auto s = aggregate_consensus_stats(r);
  EXPECT_EQ(s.non_converged, 4u);
  EXPECT_FALSE(s.mean);
  EXPECT_FALSE(s.median);
  EXPECT_THROW(aggregate_consensus_stats(std::vector<std::optional<Iteration>>{}), InvalidArgument);
}

TEST(AggregateStats, PermutationInvariantAndOrdered) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::optional<Iteration>> r(1 + rng.index(60));
    for (auto& x : r)
      if (rng.index(5) != 0) x = 1 + rng.index(5000);
    auto shuffled = r;
    for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.index(k)]);
    const auto a = aggregate_consensus_stats(r);
    const auto b = aggregate_consensus_stats(shuffled);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.median, b.median);
    EXPECT_EQ(a.p05, b.p05);
    EXPECT_EQ(a.p95, b.p95);
    EXPECT_EQ(a.non_converged, b.non_converged);
    EXPECT_EQ(a.n_trials, a.consensus_iterations.size());
    if (a.median) {
      EXPECT_LE(*a.p05, *a.median);
      EXPECT_LE(*a.median, *a.p95);
      std::vector<double> conv;
      for (const auto& x : r)
        if (x) conv.push_back(static_cast<double>(*x));
      EXPECT_GE(*a.mean, *std::min_element(conv.begin(), conv.end()));
      EXPECT_LE(*a.mean, *std::max_element(conv.begin(), conv.end()));
      EXPECT_EQ(a.n_trials, conv.size() + a.non_converged);
    }
  }
}

TEST(SyncAccuracy, LatencyExamples) {
  using ms = std::chrono::duration<double, std::milli>;
  EXPECT_EQ(sync_accuracy(35, ms(0.5)), ms(17.5));
  EXPECT_EQ(sync_accuracy(70, ms(0.5)), ms(35.0));
  EXPECT_EQ(sync_accuracy(1, std::chrono::duration<double>(1.0)), std::chrono::duration<double>(1.0));
}

TEST(SyncAccuracy, Bilinear) {
  using ms = std::chrono::duration<double, std::milli>;
  for (std::uint64_t a = 1; a < 50; a += 7)
    for (std::uint64_t b = 1; b < 50; b += 5)
      for (double l : {0.25, 0.5, 3.0}) {
        EXPECT_EQ(sync_accuracy(a + b, ms(l)), sync_accuracy(a, ms(l)) + sync_accuracy(b, ms(l)));
        EXPECT_EQ(sync_accuracy(a, ms(l + 2.0)), sync_accuracy(a, ms(l)) + sync_accuracy(a, ms(2.0)));
      }
}

TEST(SyncAccuracy, RejectsNonPositive) {
  using ms = std::chrono::duration<double, std::milli>;
  EXPECT_THROW(sync_accuracy(0, ms(0.5)), InvalidArgument);
  EXPECT_THROW(sync_accuracy(3, ms(0.0)), InvalidArgument);
  EXPECT_THROW(sync_accuracy(3, ms(-1.0)), InvalidArgument);
}

TEST(MseFloor, ConstantTail) {
  std::vector<double> mse;
  for (int l = 0; l < 40; ++l) mse.push_back(std::ldexp(1.0, -l));
  mse.resize(100, mse.back() / 2);
  const auto at = mse_floor_iteration(mse_series(mse), PlateauOptions{20, 1e-9});
  EXPECT_EQ(at, std::optional<Iteration>(40));
  EXPECT_EQ(mse_floor_iteration(mse_series(mse), PlateauOptions{20, 0.3}), std::optional<Iteration>(40));
}

TEST(MseFloor, GeometricDecayHasNoPlateau) {
  std::vector<double> mse;
  for (int l = 0; l < 300; ++l) mse.push_back(std::pow(0.9, l));
  EXPECT_FALSE(mse_floor_iteration(mse_series(mse), PlateauOptions{20, 0.01}));
}

TEST(MseFloor, HalvingThenNoisyFloor) {
  std::vector<double> mse;
  for (int l = 0; l <= 35; ++l) mse.push_back(std::ldexp(1.0, -l));
  for (int l = 36; l < 120; ++l) mse.push_back(std::ldexp(1.0, -35) * (l % 2 == 0 ? 1.01 : 0.99));
  ASSERT_EQ(plateau_scan(mse, 10, 0.05), std::optional<Iteration>(35));
  EXPECT_EQ(mse_floor_iteration(mse_series(mse), PlateauOptions{10, 0.05}), std::optional<Iteration>(35));
}

TEST(MseFloor, AgreesWithScanAndMonotoneInTolerance) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> mse(30 + rng.index(100));
    double level = 1.0;
    for (auto& m : mse) {
      level *= rng.uniform(0.7, 1.0);
      m = level * rng.uniform(0.95, 1.05);
    }
    const std::size_t window = 2 + rng.index(20);
    std::optional<Iteration> previous;
    bool first = true;
    for (double tol : {0.001, 0.01, 0.05, 0.1, 0.3, 1.0}) {
      const auto at = mse_floor_iteration(mse_series(mse), PlateauOptions{window, tol});
      EXPECT_EQ(at, plateau_scan(mse, window, tol));
      if (!first && previous) {
        ASSERT_TRUE(at);
        EXPECT_LE(*at, *previous);
      }
      previous = at;
      first = false;
    }
  }
}

TEST(MseFloor, RejectsBadInput) {
  const auto series = mse_series({1.0, 0.5, 0.25});
  EXPECT_THROW(mse_floor_iteration(series, PlateauOptions{5, 0.05}), InsufficientData);
  EXPECT_THROW(mse_floor_iteration(series, PlateauOptions{1, 0.05}), InvalidArgument);
}
