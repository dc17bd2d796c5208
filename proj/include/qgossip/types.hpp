#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace qgossip {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;

/// Node coordinates in meters, one row per vertex.
using Positions = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

using Iteration = std::uint64_t;

}  // namespace qgossip
