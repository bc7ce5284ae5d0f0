#pragma once

#include <Eigen/Core>

namespace kgagent {

// Scalar for all learnable math. Double keeps the finite-difference checks honest;
// switch to float only if you re-tune the gradient-check tolerances.
using Real = double;

using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

}  // namespace kgagent
