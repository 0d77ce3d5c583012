// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "iscat/constants.hpp"
#include "iscat/grid.hpp"

namespace iscat {

/// Zero/first-order Hankel functions of the second kind for real x > 0.
inline cplx hankel2_0(double x) { return {std::cyl_bessel_j(0.0, x), -std::cyl_neumann(0.0, x)}; }
inline cplx hankel2_1(double x) { return {std::cyl_bessel_j(1.0, x), -std::cyl_neumann(1.0, x)}; }

/// Free-space 2-D TMz kernel (-j/4) k_b^2 H0^(2)(k_b r).
inline cplx greens_kernel(double k_b, double r) {
    return cplx(0.0, -0.25) * k_b * k_b * hankel2_0(k_b * r);
}

/// In-domain Green's matrix: cell-integrated kernel, pulse basis with
/// point matching off the diagonal and an equivalent-area-disk self term.
Eigen::MatrixXcd greens_domain(const Grid2D& grid, double k_b);

/// Block of greens_domain restricted to a pixel subset (rows = cols = idx),
/// built directly so restricted solves never touch the full matrix.
Eigen::MatrixXcd greens_domain_block(const Grid2D& grid, double k_b, const std::vector<int>& idx);

/// Columns of greens_domain for a pixel subset (all rows, cols = idx).
Eigen::MatrixXcd greens_domain_cols(const Grid2D& grid, double k_b, const std::vector<int>& idx);

/// Self term: kernel integrated over a disk of the same area as one cell.
cplx greens_self_term(double k_b, double cell_side);

/// Propagation matrix between point sets: entry (i, j) is the kernel from
/// from[j] to to[i], scaled by source_cell_area when the sources are grid
/// pixels (pass 0 for point sources).
Eigen::MatrixXcd greens_obs(const std::vector<Eigen::Vector2d>& from,
                            const std::vector<Eigen::Vector2d>& to, double k_b,
                            double source_cell_area = 0.0);

} // namespace iscat
