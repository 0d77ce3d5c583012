// SPDX-License-Identifier: Apache-2.0
#include "iscat/frequency.hpp"

#include "iscat/errors.hpp"

namespace iscat {

FrequencyGrid build_frequency_grid(double f_c, double delta_f, int K) {
    if (K < 1) throw ConfigError("frequency grid needs K >= 1 tones");
    if (f_c <= 0.0) throw ConfigError("center frequency must be positive");
    if (delta_f < 0.0 || (K > 1 && delta_f == 0.0))
        throw ConfigError("tone spacing must be positive for multi-tone grids");

    FrequencyGrid g;
    g.f_c = f_c;
    g.delta_f = delta_f;
    g.K = K;
    g.tones.resize(K);
    for (int k = 1; k <= K; ++k)
        g.tones[k - 1] = f_c + (k - 0.5 * (K + 1)) * delta_f;
    if (g.tones.front() <= 0.0)
        throw ConfigError("lowest tone is nonpositive; shrink delta_f or K");
    return g;
}

} // namespace iscat
