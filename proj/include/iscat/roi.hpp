// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "iscat/grid.hpp"

namespace iscat {

/// Sorted, unique pixel subset retained for inversion.
struct RoiIndexSet {
    std::vector<int> indices;
    int grid_side = 0;

    int P() const { return static_cast<int>(indices.size()); }
};

RoiIndexSet roi_from_indices(std::vector<int> indices, int grid_side);
RoiIndexSet roi_full(const Grid2D& grid);

/// Axis-aligned square ROI of the given side, centered at (center_row,
/// center_col) and clipped to the grid.
RoiIndexSet roi_square(const Grid2D& grid, int center_row, int center_col, int side);

} // namespace iscat
