// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace iscat {

/// Uniform circular array on the observation curve. The same ring carries the
/// transmit and receive elements.
struct ArrayGeometry {
    double radius_m = 0.0;
    int n_tx = 0;
    int n_rx = 0;
    std::vector<Eigen::Vector2d> tx_positions;
    std::vector<Eigen::Vector2d> rx_positions;
};

ArrayGeometry make_uca(double radius_m, int n_tx, int n_rx);

} // namespace iscat
