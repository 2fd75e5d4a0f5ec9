#pragma once

#include <Eigen/Core>

namespace dto {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Time in seconds.
using Seconds = double;

}  // namespace dto
