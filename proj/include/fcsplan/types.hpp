#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace fcsplan {

/// Dense daily/span profiles (kW, per-unit loading, temperatures, probabilities).
using ArrayXd = Eigen::ArrayXd;

/// Binary decision vector; one entry per candidate location.
using BinaryVector = Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>;

/// Row-per-sample population of binary vectors.
using BinaryMatrix = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Placement of stations over the candidate set K.
using Placement = BinaryVector;

using NodeId = int;  // transportation node ids are 1-based and contiguous

}  // namespace fcsplan
