#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace netinfer {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// 0-based feature (column) indices.
using FeatureSet = std::vector<std::size_t>;

} // namespace netinfer
