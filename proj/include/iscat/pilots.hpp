// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace iscat {

/// Per-tone pilot matrices X_k (N_t x T) with unit-norm columns.
struct PilotBook {
    int n_tx = 0;
    int T = 0;
    int K = 0;
    uint64_t seed = 0;
    std::vector<Eigen::MatrixXcd> X;
};

PilotBook make_pilots(int n_tx, int T, int K, uint64_t seed);

} // namespace iscat
