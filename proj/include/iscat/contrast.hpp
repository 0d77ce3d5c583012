// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "iscat/constants.hpp"
#include "iscat/grid.hpp"

namespace iscat {

/// Per-pixel complex contrast chi = eps_r - 1 + j sigma / (eps0 * omega_c),
/// frequency-flat over the probing band.
struct ContrastMap {
    Eigen::VectorXcd chi;
    Eigen::VectorXd eps_r;
    Eigen::VectorXd sigma; // [S/m]
};

ContrastMap contrast_from_scene(const Grid2D& grid, const Eigen::VectorXd& eps_r,
                                const Eigen::VectorXd& sigma, double omega_c);

/// Indices of pixels with nonzero contrast.
std::vector<int> contrast_support(const Eigen::VectorXcd& chi);

} // namespace iscat
