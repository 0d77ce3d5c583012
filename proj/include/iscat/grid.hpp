// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace iscat {

/// Uniform square pixel grid centered at the origin. Pixels are row-major:
/// p = row * side_pixels + col, x increasing with col, y increasing with row.
struct Grid2D {
    int side_pixels = 0;
    double extent_m = 0.0;
    std::vector<Eigen::Vector2d> centers;
    double cell_area = 0.0;

    int size() const { return side_pixels * side_pixels; }
    double cell_side() const { return extent_m / side_pixels; }
    int index(int row, int col) const { return row * side_pixels + col; }
};

Grid2D make_grid(int side_pixels, double extent_m);

} // namespace iscat
