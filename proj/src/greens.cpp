// SPDX-License-Identifier: Apache-2.0
#include "iscat/greens.hpp"

#include "iscat/errors.hpp"

namespace iscat {

cplx greens_self_term(double k_b, double cell_side) {
    // Integrate (-j/4) k^2 H0^(2)(k r) over a disk with the cell's area,
    // radius a = h / sqrt(pi):
    //   int_0^a J0(kr) r dr = a J1(ka) / k
    //   int_0^a Y0(kr) r dr = (ka Y1(ka) + 2/pi) / k^2
    // which collapses to (-j pi ka / 2) H1^(2)(ka) - 1.
    const double a = cell_side / std::sqrt(constants::pi);
    const double ka = k_b * a;
    return cplx(0.0, -0.5 * constants::pi * ka) * hankel2_1(ka) - 1.0;
}

Eigen::MatrixXcd greens_domain(const Grid2D& grid, double k_b) {
    if (k_b <= 0.0) throw ConfigError("wavenumber must be positive");
    if (grid.cell_area <= 0.0) throw ConfigError("grid has zero cell area");

    const int n = grid.size();
    Eigen::MatrixXcd G(n, n);
    const cplx self = greens_self_term(k_b, grid.cell_side());
    for (int j = 0; j < n; ++j) {
        G(j, j) = self;
        for (int i = j + 1; i < n; ++i) {
            const double r = (grid.centers[i] - grid.centers[j]).norm();
            const cplx g = grid.cell_area * greens_kernel(k_b, r);
            G(i, j) = g;
            G(j, i) = g;
        }
    }
    return G;
}

Eigen::MatrixXcd greens_domain_block(const Grid2D& grid, double k_b, const std::vector<int>& idx) {
    if (k_b <= 0.0) throw ConfigError("wavenumber must be positive");
    const int p = static_cast<int>(idx.size());
    Eigen::MatrixXcd G(p, p);
    const cplx self = greens_self_term(k_b, grid.cell_side());
    for (int j = 0; j < p; ++j) {
        G(j, j) = self;
        for (int i = j + 1; i < p; ++i) {
            const double r = (grid.centers[idx[i]] - grid.centers[idx[j]]).norm();
            const cplx g = grid.cell_area * greens_kernel(k_b, r);
            G(i, j) = g;
            G(j, i) = g;
        }
    }
    return G;
}

Eigen::MatrixXcd greens_domain_cols(const Grid2D& grid, double k_b, const std::vector<int>& idx) {
    if (k_b <= 0.0) throw ConfigError("wavenumber must be positive");
    const int n = grid.size();
    const int p = static_cast<int>(idx.size());
    Eigen::MatrixXcd G(n, p);
    const cplx self = greens_self_term(k_b, grid.cell_side());
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) {
            if (i == idx[j]) {
                G(i, j) = self;
                continue;
            }
            const double r = (grid.centers[i] - grid.centers[idx[j]]).norm();
            G(i, j) = grid.cell_area * greens_kernel(k_b, r);
        }
    return G;
}

Eigen::MatrixXcd greens_obs(const std::vector<Eigen::Vector2d>& from,
                            const std::vector<Eigen::Vector2d>& to, double k_b,
                            double source_cell_area) {
    if (k_b <= 0.0) throw ConfigError("wavenumber must be positive");
    const double scale = source_cell_area > 0.0 ? source_cell_area : 1.0;
    Eigen::MatrixXcd H(to.size(), from.size());
    for (int j = 0; j < static_cast<int>(from.size()); ++j)
        for (int i = 0; i < static_cast<int>(to.size()); ++i) {
            const double r = (to[i] - from[j]).norm();
            if (r <= 0.0)
                throw NumericalError("coincident source/observation pair makes the kernel singular");
            H(i, j) = scale * greens_kernel(k_b, r);
        }
    return H;
}

} // namespace iscat
