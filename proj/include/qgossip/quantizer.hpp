#pragma once

#include "qgossip/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>

namespace qgossip {

/// Uniform mid-tread quantizer with 2^bits levels m + k*step over [m, M].
/// Inputs outside the range clamp to the end levels; ties round toward M.
template <typename Scalar>
class BasicQuantizer {
 public:
  static constexpr int max_bits = 48;

  BasicQuantizer(int bits, Scalar range_min, Scalar range_max)
      : bits_(bits), min_(range_min), max_(range_max) {
    if (bits < 1 || bits > max_bits)
      throw InvalidArgument("quantizer bits must lie in [1, " + std::to_string(max_bits) + "]");
    if (!(range_max > range_min)) throw InvalidArgument("quantizer range needs max > min");
    max_level_ = (std::uint64_t{1} << bits) - 1;
    step_ = (max_ - min_) / static_cast<Scalar>(max_level_);
  }

  int bits() const noexcept { return bits_; }
  Scalar min() const noexcept { return min_; }
  Scalar max() const noexcept { return max_; }
  Scalar step() const noexcept { return step_; }
  std::uint64_t max_level() const noexcept { return max_level_; }

  bool contains(Scalar x) const noexcept { return x >= min_ && x <= max_; }

  std::uint64_t level(Scalar x) const {
    if (!(x > min_)) return 0;  // also catches NaN
    if (x >= max_) return max_level_;
    using std::floor;
    const Scalar k = floor((x - min_) / step_ + Scalar(0.5));
    return k >= static_cast<Scalar>(max_level_) ? max_level_ : static_cast<std::uint64_t>(k);
  }

  Scalar value(std::uint64_t level) const {
    if (level >= max_level_) return max_;
    return min_ + static_cast<Scalar>(level) * step_;
  }

  Scalar operator()(Scalar x) const { return value(level(x)); }

  friend bool operator==(const BasicQuantizer&, const BasicQuantizer&) = default;

 private:
  int bits_;
  Scalar min_;
  Scalar max_;
  Scalar step_{};
  std::uint64_t max_level_{};
};

using Quantizer = BasicQuantizer<double>;

template <typename Scalar>
Scalar quantize(const BasicQuantizer<Scalar>& q, Scalar x) {
  return q(x);
}

/// Coefficient-wise quantization of a vector expression.
template <typename Derived>
auto quantize(const BasicQuantizer<typename Derived::Scalar>& q, const Eigen::MatrixBase<Derived>& x) {
  return x.unaryExpr([q](typename Derived::Scalar v) { return q(v); });
}

}  // namespace qgossip
