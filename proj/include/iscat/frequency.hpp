// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "iscat/constants.hpp"

namespace iscat {

/// Symmetric probing comb around a center frequency:
/// f_k = f_c + (k - (K+1)/2) * delta_f, k = 1..K.
struct FrequencyGrid {
    double f_c = 0.0;     // center frequency [Hz]
    double delta_f = 0.0; // tone spacing [Hz]
    int K = 0;            // tone count
    std::vector<double> tones;

    double omega(int k) const { return 2.0 * constants::pi * tones.at(k); }
    double wavenumber(int k) const { return omega(k) / constants::c0; }
    double omega_c() const { return 2.0 * constants::pi * f_c; }
};

FrequencyGrid build_frequency_grid(double f_c, double delta_f, int K);

} // namespace iscat
