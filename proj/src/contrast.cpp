// SPDX-License-Identifier: Apache-2.0
#include "iscat/contrast.hpp"

#include "iscat/errors.hpp"

namespace iscat {

ContrastMap contrast_from_scene(const Grid2D& grid, const Eigen::VectorXd& eps_r,
                                const Eigen::VectorXd& sigma, double omega_c) {
    const int n = grid.size();
    if (eps_r.size() != n || sigma.size() != n)
        throw ConfigError("material vectors must have one entry per pixel");
    if (omega_c <= 0.0) throw ConfigError("omega_c must be positive");
    if ((eps_r.array() < 1.0).any())
        throw ConfigError("relative permittivity below 1 is not a passive medium here");
    if ((sigma.array() < 0.0).any())
        throw ConfigError("conductivity must be nonnegative");

    ContrastMap m;
    m.eps_r = eps_r;
    m.sigma = sigma;
    m.chi.resize(n);
    for (int p = 0; p < n; ++p) {
        const double re = eps_r[p] - 1.0;
        const double im = sigma[p] / (constants::eps0 * omega_c);
        m.chi[p] = cplx(re, im); // exact zero for vacuum pixels
    }
    return m;
}

std::vector<int> contrast_support(const Eigen::VectorXcd& chi) {
    std::vector<int> idx;
    for (int p = 0; p < chi.size(); ++p)
        if (chi[p] != cplx(0.0, 0.0)) idx.push_back(p);
    return idx;
}

} // namespace iscat
