#pragma once

#include "qgossip/errors.hpp"
#include "qgossip/quantizer.hpp"
#include "qgossip/topology.hpp"
#include "qgossip/types.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>

namespace qgossip {

template <typename Scalar>
struct NodeStates {
  Vector<Scalar> values;
  Iteration iteration = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }

  friend bool operator==(const NodeStates& a, const NodeStates& b) {
    return a.iteration == b.iteration && a.values.size() == b.values.size() &&
           (a.values.array() == b.values.array()).all();
  }
};

enum class StepKind { averaged, swapped, no_change };

struct StepOutcome {
  Edge edge;
  StepKind kind = StepKind::no_change;
  bool values_changed = false;
};

/// One pairwise exchange on `edge`, in place. Ticks the iteration counter.
///
/// Real mode (no quantizer): both endpoints move to their midpoint.
/// Quantized mode, comparing the endpoints' quantization levels:
///   equal levels           -> no change;
///   adjacent levels + swap -> the endpoints exchange their values;
///   otherwise              -> t_i += (Q(t_j) - Q(t_i)) / 2, t_j -= the same.
/// The pair sum is preserved up to one rounding per endpoint; the swap is exact.
template <typename Scalar>
StepOutcome gossip_step(NodeStates<Scalar>& s, Edge edge,
                        const std::optional<BasicQuantizer<std::type_identity_t<Scalar>>>& q,
                        bool swap_enabled) {
  const auto n = s.size();
  if (edge.u >= n || edge.v >= n)
    throw InvalidEdge("edge {" + std::to_string(edge.u) + ", " + std::to_string(edge.v) +
                      "} out of range for " + std::to_string(n) + " nodes");
  if (edge.u == edge.v) throw InvalidEdge("self-loop on vertex " + std::to_string(edge.u));

  Scalar& ti = s.values[static_cast<Eigen::Index>(edge.u)];
  Scalar& tj = s.values[static_cast<Eigen::Index>(edge.v)];
  const Scalar old_i = ti;
  const Scalar old_j = tj;
  StepOutcome out{edge, StepKind::averaged, false};

  if (!q) {
    const Scalar mid = (ti + tj) / Scalar(2);
    ti = mid;
    tj = mid;
  } else {
    const auto ki = q->level(ti);
    const auto kj = q->level(tj);
    const auto gap = ki > kj ? ki - kj : kj - ki;
    if (gap == 0) {
      out.kind = StepKind::no_change;
    } else if (gap == 1 && swap_enabled) {
      std::swap(ti, tj);
      out.kind = StepKind::swapped;
    } else {
      const Scalar delta = (q->value(kj) - q->value(ki)) / Scalar(2);
      ti = old_i + delta;
      tj = old_j - delta;
    }
  }

  out.values_changed = !(ti == old_i && tj == old_j);
  ++s.iteration;
  return out;
}

/// Largest absolute deviation of any node from `reference`.
template <typename Derived>
typename Derived::Scalar max_deviation(const Eigen::MatrixBase<Derived>& values,
                                       typename Derived::Scalar reference) {
  return (values.array() - reference).abs().maxCoeff();
}

/// Quantized mode: every node within one quantization step of the initial
/// mean (strict). Real mode: within `tol`, which must then be supplied.
template <typename Derived>
bool check_consensus(const Eigen::MatrixBase<Derived>& values, typename Derived::Scalar initial_mean,
                     const std::optional<BasicQuantizer<typename Derived::Scalar>>& q,
                     std::optional<typename Derived::Scalar> tol) {
  using Scalar = typename Derived::Scalar;
  Scalar threshold;
  if (q) {
    threshold = q->step();
  } else {
    if (!tol) throw MissingTolerance();
    threshold = *tol;
  }
  return max_deviation(values, initial_mean) < threshold;
}

template <typename Scalar>
bool check_consensus(const NodeStates<Scalar>& s, std::type_identity_t<Scalar> initial_mean,
                     const std::optional<BasicQuantizer<std::type_identity_t<Scalar>>>& q,
                     std::optional<std::type_identity_t<Scalar>> tol) {
  return check_consensus(s.values, initial_mean, q, tol);
}

struct IterationMetrics {
  Iteration iteration = 0;
  double mse = 0.0;
  double spread = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool at_consensus = false;

  friend bool operator==(const IterationMetrics&, const IterationMetrics&) = default;
};

/// MSE against the initial mean, spread D = max - min, and the consensus flag.
template <typename Scalar>
IterationMetrics compute_metrics(const NodeStates<Scalar>& s, std::type_identity_t<Scalar> initial_mean,
                                 const std::optional<BasicQuantizer<std::type_identity_t<Scalar>>>& q,
                                 std::optional<std::type_identity_t<Scalar>> tol) {
  IterationMetrics m;
  m.iteration = s.iteration;
  m.at_consensus = check_consensus(s.values, initial_mean, q, tol);
  m.mse = static_cast<double>((s.values.array() - initial_mean).square().mean());
  m.min = static_cast<double>(s.values.minCoeff());
  m.max = static_cast<double>(s.values.maxCoeff());
  m.spread = m.max - m.min;
  return m;
}

}  // namespace qgossip
