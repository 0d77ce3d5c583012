// SPDX-License-Identifier: Apache-2.0
#include "iscat/roi.hpp"

#include <algorithm>

#include "iscat/errors.hpp"

namespace iscat {

RoiIndexSet roi_from_indices(std::vector<int> indices, int grid_side) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (indices.empty()) throw ConfigError("ROI must contain at least one pixel");
    const int n = grid_side * grid_side;
    if (indices.front() < 0 || indices.back() >= n)
        throw ConfigError("ROI index outside the grid");
    return RoiIndexSet{std::move(indices), grid_side};
}

RoiIndexSet roi_full(const Grid2D& grid) {
    std::vector<int> idx(grid.size());
    for (int p = 0; p < grid.size(); ++p) idx[p] = p;
    return RoiIndexSet{std::move(idx), grid.side_pixels};
}

RoiIndexSet roi_square(const Grid2D& grid, int center_row, int center_col, int side) {
    if (side < 1) throw ConfigError("ROI square side must be positive");
    const int n = grid.side_pixels;
    int r0 = center_row - side / 2;
    int c0 = center_col - side / 2;
    r0 = std::clamp(r0, 0, std::max(0, n - side));
    c0 = std::clamp(c0, 0, std::max(0, n - side));
    const int r1 = std::min(n, r0 + side), c1 = std::min(n, c0 + side);
    std::vector<int> idx;
    idx.reserve(static_cast<size_t>(side) * side);
    for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) idx.push_back(grid.index(r, c));
    return roi_from_indices(std::move(idx), n);
}

} // namespace iscat
