// SPDX-License-Identifier: Apache-2.0
#include "iscat/pilots.hpp"

#include "iscat/constants.hpp"
#include "iscat/errors.hpp"
#include "iscat/rng.hpp"

namespace iscat {

PilotBook make_pilots(int n_tx, int T, int K, uint64_t seed) {
    if (n_tx < 1) throw ConfigError("pilot book needs n_tx >= 1");
    if (T < 1) throw ConfigError("pilot book needs T >= 1 slots");
    if (K < 1) throw ConfigError("pilot book needs K >= 1 tones");

    PilotBook book;
    book.n_tx = n_tx;
    book.T = T;
    book.K = K;
    book.seed = seed;
    book.X.reserve(K);
    for (int k = 0; k < K; ++k) {
        auto rng = make_rng(seed, 0x70696c6f74ULL, k); // pilot stream per tone
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::MatrixXcd X(n_tx, T);
        for (int t = 0; t < T; ++t) {
            for (int m = 0; m < n_tx; ++m) X(m, t) = cplx(gauss(rng), gauss(rng));
            X.col(t) /= X.col(t).norm(); // unit transmit power per slot
        }
        book.X.push_back(std::move(X));
    }
    return book;
}

} // namespace iscat
