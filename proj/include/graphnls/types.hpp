#pragma once

#include <Eigen/Core>

namespace graphnls {

using Real = double;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace graphnls
