#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace crcond {

// Rows are instances throughout: an N x D matrix holds N points of dimension D.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

// Per-instance boolean flags. vector<uint8_t> keeps element access plain.
using Flags = std::vector<std::uint8_t>;

}  // namespace crcond
