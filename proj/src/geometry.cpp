// SPDX-License-Identifier: Apache-2.0
#include "iscat/geometry.hpp"

#include <cmath>

#include "iscat/constants.hpp"
#include "iscat/errors.hpp"

namespace iscat {

ArrayGeometry make_uca(double radius_m, int n_tx, int n_rx) {
    if (radius_m <= 0.0) throw ConfigError("UCA radius must be positive");
    if (n_tx < 1 || n_rx < 1) throw ConfigError("UCA needs at least one Tx and one Rx element");

    ArrayGeometry a;
    a.radius_m = radius_m;
    a.n_tx = n_tx;
    a.n_rx = n_rx;
    a.tx_positions.reserve(n_tx);
    for (int m = 0; m < n_tx; ++m) {
        const double phi = 2.0 * constants::pi * m / n_tx;
        a.tx_positions.emplace_back(radius_m * std::cos(phi), radius_m * std::sin(phi));
    }
    a.rx_positions.reserve(n_rx);
    for (int m = 0; m < n_rx; ++m) {
        const double phi = 2.0 * constants::pi * m / n_rx;
        a.rx_positions.emplace_back(radius_m * std::cos(phi), radius_m * std::sin(phi));
    }
    return a;
}

} // namespace iscat
