// SPDX-License-Identifier: Apache-2.0
#include "iscat/grid.hpp"

#include "iscat/errors.hpp"

namespace iscat {

Grid2D make_grid(int side_pixels, double extent_m) {
    if (side_pixels < 1) throw ConfigError("grid needs at least one pixel per side");
    if (extent_m <= 0.0) throw ConfigError("grid extent must be positive");

    Grid2D g;
    g.side_pixels = side_pixels;
    g.extent_m = extent_m;
    const double h = extent_m / side_pixels;
    g.cell_area = h * h;
    g.centers.reserve(static_cast<size_t>(side_pixels) * side_pixels);
    for (int row = 0; row < side_pixels; ++row)
        for (int col = 0; col < side_pixels; ++col)
            g.centers.emplace_back(-0.5 * extent_m + (col + 0.5) * h,
                                   -0.5 * extent_m + (row + 0.5) * h);
    return g;
}

} // namespace iscat
