// SPDX-License-Identifier: Apache-2.0
#include "iscat/lsm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iscat/errors.hpp"

namespace iscat {

Eigen::MatrixXcd stack_slots(const Eigen::MatrixXcd& G2_gamma, int T) {
    Eigen::MatrixXcd S(G2_gamma.rows() * T, G2_gamma.cols());
    for (int t = 0; t < T; ++t) S.middleRows(t * G2_gamma.rows(), G2_gamma.rows()) = G2_gamma;
    return S;
}

Eigen::MatrixXcd lsm_solve(const Eigen::MatrixXcd& U_k, const Eigen::MatrixXcd& G2_stacked,
                           double zeta) {
    if (zeta <= 0.0) throw ConfigError("Tikhonov weight zeta must be positive");
    if (U_k.rows() != G2_stacked.rows())
        throw ConfigError("multi-static matrix and stacked Green probe row mismatch");
    Eigen::MatrixXcd gram = U_k.adjoint() * U_k;
    gram.diagonal().array() += zeta;
    return Eigen::LDLT<Eigen::MatrixXcd>(gram).solve(U_k.adjoint() * G2_stacked);
}

Eigen::VectorXd indicator(const std::vector<Eigen::MatrixXcd>& c_list) {
    if (c_list.empty()) throw ConfigError("indicator needs at least one tone");
    const Eigen::Index n = c_list.front().cols();
    Eigen::VectorXd J = Eigen::VectorXd::Zero(n);
    for (const auto& c : c_list) {
        if (c.cols() != n) throw ConfigError("coefficient matrices disagree on pixel count");
        for (Eigen::Index p = 0; p < n; ++p) {
            const double sq = std::max(c.col(p).squaredNorm(), 1e-300);
            J[p] += std::log10(sq);
        }
    }
    return J / double(c_list.size());
}

double max_gap_eta(const Eigen::VectorXd& scores, double q_trim) {
    if (q_trim <= 0.0 || q_trim > 0.5) throw ConfigError("q_trim must lie in (0, 1/2]");
    const int n = static_cast<int>(scores.size());
    const int w = static_cast<int>(std::ceil(q_trim * n));
    // Gap indices run 1..n-1 (1-based); the trimmed window is {w, ..., n-1-w}.
    if (w > n - 1 - w) {
        std::ostringstream msg;
        msg << "trimming window empty: need at least " << (2 * w + 1) << " pixels, got " << n;
        throw ConfigError(msg.str());
    }
    std::vector<double> sorted(scores.data(), scores.data() + n);
    std::sort(sorted.begin(), sorted.end());
    int best = w;
    double best_gap = -1.0;
    for (int i = w; i <= n - 1 - w; ++i) {
        const double gap = sorted[i] - sorted[i - 1];
        if (gap > best_gap + 0.0) { // strict: smallest index wins ties
            best_gap = gap;
            best = i;
        }
    }
    return 0.5 * (sorted[best - 1] + sorted[best]);
}

double trimmed_max_gap_threshold(const Eigen::VectorXd& J, double epsilon, double q_trim,
                                 Eigen::VectorXd* scores_out) {
    if (epsilon <= 0.0) throw ConfigError("stabilizer epsilon must be positive");
    const int n = static_cast<int>(J.size());
    const double jmax = J.maxCoeff(), jmin = J.minCoeff();
    Eigen::VectorXd s = (jmax - J.array()) / (jmax - jmin + epsilon);
    if (scores_out) *scores_out = s;
    if (jmax == jmin) {
        if (q_trim <= 0.0 || q_trim > 0.5) throw ConfigError("q_trim must lie in (0, 1/2]");
        return 0.0; // degenerate: all pixels alike, keep everything
    }
    (void)n;
    return max_gap_eta(s, q_trim);
}

RoiIndexSet roi_select(const Eigen::VectorXd& scores, double eta, int grid_side) {
    std::vector<int> idx;
    for (int p = 0; p < scores.size(); ++p)
        if (scores[p] <= eta) idx.push_back(p);
    if (idx.empty()) throw NumericalError("threshold rejected every pixel; ROI is empty");
    return roi_from_indices(std::move(idx), grid_side);
}

LsmResult lsm_run(const ContrastMap& chi, const SensingSetup& setup, const LsmConfig& cfg,
                  double snr_db, uint64_t seed) {
    LsmResult res;
    res.c_k.reserve(setup.freq.K);
    for (int k = 0; k < setup.freq.K; ++k) {
        const Eigen::MatrixXcd U = multistatic_response(chi, setup, k, snr_db, seed);
        const Eigen::MatrixXcd G2s = stack_slots(setup.channels[k].G2_gamma, setup.pilots.T);
        res.c_k.push_back(lsm_solve(U, G2s, cfg.zeta));
    }
    res.indicator = indicator(res.c_k);
    res.eta = trimmed_max_gap_threshold(res.indicator, cfg.epsilon, cfg.q_trim, &res.scores);
    res.degenerate = res.indicator.maxCoeff() == res.indicator.minCoeff();
    return res;
}

} // namespace iscat
