#pragma once

#include <cmath>

#include "dto/types.hpp"

namespace dto {

/// Exponential barrier-parameter and slack schedules
///   rho(t)   = a1 * exp(a2 * t)   (positive, strictly increasing)
///   sigma(t) = a3 * exp(-a4 * t)  (positive, strictly decreasing to 0)
class BarrierSchedule {
 public:
  /// Throws std::invalid_argument unless all four coefficients are > 0.
  BarrierSchedule(double a1, double a2, double a3, double a4);

  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  double a3() const noexcept { return a3_; }
  double a4() const noexcept { return a4_; }

  double barrier_parameter(Seconds t) const { return a1_ * std::exp(a2_ * t); }
  double barrier_parameter_rate(Seconds t) const { return a2_ * barrier_parameter(t); }
  double slack(Seconds t) const { return a3_ * std::exp(-a4_ * t); }
  double slack_rate(Seconds t) const { return -a4_ * slack(t); }

  friend bool operator==(const BarrierSchedule&, const BarrierSchedule&) = default;

 private:
  double a1_, a2_, a3_, a4_;
};

}  // namespace dto
