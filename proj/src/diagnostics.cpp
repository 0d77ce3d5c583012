// SPDX-License-Identifier: Apache-2.0
#include "iscat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iscat/errors.hpp"
#include "iscat/rng.hpp"

namespace iscat {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SpectralReport spectral_report(const Eigen::MatrixXcd& A_sub) {
    if (A_sub.size() == 0) throw ConfigError("spectral report of an empty operator");
    Eigen::VectorXd sv;
    if (A_sub.rows() > 2 * A_sub.cols()) {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A_sub);
        Eigen::MatrixXcd R = qr.matrixQR()
                                 .topRows(A_sub.cols())
                                 .triangularView<Eigen::Upper>();
        sv = Eigen::BDCSVD<Eigen::MatrixXcd>(R).singularValues();
    } else {
        sv = Eigen::BDCSVD<Eigen::MatrixXcd>(A_sub).singularValues();
    }
    SpectralReport rep;
    rep.singular_values = sv;
    rep.sigma_max = sv(0);
    rep.sigma_min = sv(sv.size() - 1);
    rep.kappa = rep.sigma_min > 0.0 ? rep.sigma_max / rep.sigma_min : kInf;
    return rep;
}

static Eigen::MatrixXcd normalize_columns(const Eigen::MatrixXcd& A) {
    Eigen::MatrixXcd An = A;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double n = A.col(j).norm();
        if (n == 0.0) {
            std::ostringstream msg;
            msg << "operator column " << j << " is identically zero";
            throw NumericalError(msg.str());
        }
        An.col(j) /= n;
    }
    return An;
}

CoherenceReport ncc_report(const Eigen::MatrixXcd& A_sub) {
    const Eigen::MatrixXcd An = normalize_columns(A_sub);
    const Eigen::Index P = An.cols();
    const Eigen::MatrixXcd Phi = An.adjoint() * An;

    CoherenceReport rep;
    rep.ncc = Phi.cwiseAbs();
    rep.ncc.diagonal().setOnes();
    rep.gersh_radii = rep.ncc.rowwise().sum() - Eigen::VectorXd::Ones(P);
    rep.r_max = P > 0 ? rep.gersh_radii.maxCoeff() : 0.0;
    rep.mu_eff = 0.0;
    for (Eigen::Index j = 0; j < P; ++j)
        for (Eigen::Index i = 0; i < P; ++i)
            if (i != j) rep.mu_eff = std::max(rep.mu_eff, rep.ncc(i, j));
    rep.lambda_lo = 1.0 - rep.r_max;
    rep.lambda_hi = 1.0 + rep.r_max;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Phi, Eigen::EigenvaluesOnly);
    const double lmin = std::max(es.eigenvalues().minCoeff(), 0.0);
    const double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
    rep.sigma_min = std::sqrt(lmin);
    rep.sigma_max = std::sqrt(lmax);
    rep.kappa = rep.sigma_min > 0.0 ? rep.sigma_max / rep.sigma_min : kInf;

    const double xi = double(P - 1) * rep.mu_eff;
    rep.bound_valid = xi < 1.0;
    rep.kappa_bound = rep.bound_valid ? std::sqrt((1.0 + xi) / (1.0 - xi)) : kInf;
    return rep;
}

CoherenceSplit coherence_split(const Eigen::MatrixXcd& A_full,
                               const std::vector<int>& true_support) {
    const Eigen::Index N = A_full.cols();
    std::vector<char> is_asr(N, 0);
    for (int p : true_support) {
        if (p < 0 || p >= N) throw ConfigError("support index outside the grid");
        is_asr[p] = 1;
    }
    const Eigen::Index n_asr = static_cast<Eigen::Index>(true_support.size());
    if (n_asr == 0 || n_asr == N)
        throw ConfigError("coherence split requires both air and scatterer pixels");

    const Eigen::MatrixXcd An = normalize_columns(A_full);
    const Eigen::MatrixXd mu = (An.adjoint() * An).cwiseAbs();

    CoherenceSplit s;
    double air_sum = 0.0, asr_sum = 0.0, cross_sum = 0.0;
    Eigen::Index air_n = 0, asr_n = 0, cross_n = 0;
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index i = j + 1; i < N; ++i) {
            const double m = mu(i, j);
            if (!is_asr[i] && !is_asr[j]) {
                air_sum += m;
                ++air_n;
                s.air_max = std::max(s.air_max, m);
            } else if (is_asr[i] && is_asr[j]) {
                asr_sum += m;
                ++asr_n;
                s.asr_max = std::max(s.asr_max, m);
            } else {
                cross_sum += m;
                ++cross_n;
                s.cross_max = std::max(s.cross_max, m);
            }
        }
    s.air_mean = air_n ? air_sum / double(air_n) : 0.0;
    s.asr_mean = asr_n ? asr_sum / double(asr_n) : 0.0;
    s.cross_mean = cross_n ? cross_sum / double(cross_n) : 0.0;
    return s;
}

RoiQuality roi_quality(const RoiIndexSet& roi, const std::vector<int>& true_support) {
    if (true_support.empty()) throw ConfigError("true support is empty");
    std::vector<int> supp = true_support;
    std::sort(supp.begin(), supp.end());
    RoiQuality q;
    q.k_true = static_cast<int>(supp.size());
    for (int p : roi.indices)
        if (std::binary_search(supp.begin(), supp.end(), p))
            ++q.tau;
    q.n_fp = roi.P() - q.tau;
    q.recall = double(q.tau) / double(q.k_true);
    q.precision = roi.P() > 0 ? double(q.tau) / double(roi.P()) : 0.0;
    return q;
}

MismatchBound condition_bound_from_mismatch(double mu_eff, double recall, double precision,
                                            int k_true) {
    if (precision <= 0.0) throw ConfigError("precision must be positive");
    if (k_true < 1) throw ConfigError("true support size must be positive");
    MismatchBound b;
    b.p_effective = (recall / precision) * double(k_true);
    b.xi = (b.p_effective - 1.0) * mu_eff;
    b.deriv_ratio = b.p_effective - 1.0;
    b.valid = b.xi < 1.0;
    b.kappa_max = b.valid ? std::sqrt((1.0 + b.xi) / (1.0 - b.xi)) : kInf;
    return b;
}

CrlbReport crlb_report(const Eigen::MatrixXcd& A_sub, double noise_var) {
    if (noise_var <= 0.0) throw ConfigError("noise variance must be positive");
    const Eigen::Index P = A_sub.cols();
    const Eigen::MatrixXcd Z = A_sub.adjoint() * A_sub;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Z, Eigen::EigenvaluesOnly);

    CrlbReport rep;
    rep.lambda_min_Z = std::max(es.eigenvalues().minCoeff(), 0.0);
    rep.crlb_spectral = rep.lambda_min_Z > 0.0 ? noise_var / rep.lambda_min_Z : kInf;

    rep.d_min = kInf;
    for (Eigen::Index j = 0; j < P; ++j) rep.d_min = std::min(rep.d_min, A_sub.col(j).norm());
    rep.mu_eff = ncc_report(A_sub).mu_eff;
    const double denom = 1.0 - double(P - 1) * rep.mu_eff;
    rep.crlb_upper_bound =
        denom > 0.0 ? noise_var / (rep.d_min * rep.d_min * denom) : kInf;
    rep.chain_valid = denom > 0.0 && rep.crlb_spectral <= rep.crlb_upper_bound * (1.0 + 1e-12);
    return rep;
}

PhaseMixingRun phase_mixing_mc(const std::vector<int>& K_values, double threshold, int trials,
                               uint64_t seed, const std::vector<double>* varphi) {
    if (trials < 1000) throw ConfigError("phase-mixing Monte Carlo needs at least 1000 trials");
    if (threshold <= 0.0) throw ConfigError("threshold must be positive");
    PhaseMixingRun run;
    run.K_values = K_values;
    run.threshold = threshold;
    run.trials = trials;
    std::uniform_real_distribution<double> unif(0.0, 2.0 * constants::pi);
    for (size_t ki = 0; ki < K_values.size(); ++ki) {
        const int K = K_values[ki];
        if (K < 1) throw ConfigError("K must be positive");
        if (varphi && static_cast<int>(varphi->size()) < K)
            throw ConfigError("geometric phase list shorter than K");
        auto rng = make_rng(seed, 0x70686d6978ULL, static_cast<uint64_t>(ki));
        long hits = 0;
        double sq_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            cplx acc = 0.0;
            for (int k = 0; k < K; ++k) {
                const double phase = unif(rng) + (varphi ? (*varphi)[k] : 0.0);
                acc += std::polar(1.0, phase);
            }
            const double mag = std::abs(acc) / double(K);
            if (mag <= threshold) ++hits;
            sq_sum += mag * mag;
        }
        run.empirical_prob.push_back(double(hits) / double(trials));
        run.markov_bound.push_back(1.0 - 1.0 / (double(K) * threshold * threshold));
        run.mean_sq_zbar.push_back(sq_sum / double(trials));
    }
    return run;
}

EffectivePhase effective_phase(const Grid2D& grid, const std::vector<int>& asr, int i, int j,
                               double k_b) {
    if (i == j) throw ConfigError("effective phase requires distinct pixels");
    EffectivePhase ep;
    ep.asymptotic_sum = 0.0;
    ep.exact_sum = 0.0;
    const Eigen::Vector2d ri = grid.centers[i], rj = grid.centers[j];
    const double b_sq = std::pow(k_b * k_b / 4.0, 2); // |b_k|^2, b_k = -j k_b^2/4
    for (int m : asr) {
        if (m == i || m == j) continue; // asymptotic weight singular at zero range
        const Eigen::Vector2d& rm = grid.centers[m];
        const double di = (rm - ri).norm(), dj = (rm - rj).norm();
        const double alpha = 2.0 * b_sq / (constants::pi * k_b * std::sqrt(di * dj));
        const double phi = k_b * (dj - di);
        ep.asymptotic_sum += alpha * std::polar(1.0, -phi);
        ep.exact_sum += std::conj(greens_kernel(k_b, di)) * greens_kernel(k_b, dj);
    }
    ep.remainder = ep.exact_sum - ep.asymptotic_sum;
    ep.varphi = std::arg(ep.asymptotic_sum);
    return ep;
}

AirCoherenceBound air_coherence_bound(const Eigen::VectorXcd& u_i, const Eigen::VectorXcd& u_j,
                                      const Eigen::VectorXcd& v_i, const Eigen::VectorXcd& v_j) {
    const double U = u_i.norm(), V = v_i.norm();
    const double Uj = u_j.norm(), Vj = v_j.norm();
    if (U == 0.0 || V == 0.0 || Uj == 0.0 || Vj == 0.0)
        throw NumericalError("zero-norm Khatri-Rao factor");

    AirCoherenceBound b;
    b.gamma = u_i.dot(u_j) / (U * U);
    b.rho = v_i.dot(v_j) / (V * V);
    b.eps_u = (u_j - b.gamma * u_i).norm() / U;
    b.eps_v = (v_j - b.rho * v_i).norm() / V;
    b.delta_ij = std::abs(b.gamma) * b.eps_v + std::abs(b.rho) * b.eps_u + b.eps_u * b.eps_v;
    b.lower_bound = (std::abs(b.rho * b.gamma) - b.delta_ij) /
                    ((std::abs(b.gamma) + b.eps_u) * (std::abs(b.rho) + b.eps_v));
    b.observed_mu =
        std::abs(u_i.dot(u_j)) * std::abs(v_i.dot(v_j)) / (U * V * Uj * Vj);
    return b;
}

std::vector<AirCoherenceBound> air_coherence_bounds(const ToneOperator& op,
                                                    const Eigen::MatrixXcd& H2,
                                                    const std::vector<std::pair<int, int>>& pairs) {
    std::vector<AirCoherenceBound> out;
    out.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        const Eigen::VectorXcd u_i = op.Et.row(i).transpose();
        const Eigen::VectorXcd u_j = op.Et.row(j).transpose();
        out.push_back(air_coherence_bound(u_i, u_j, H2.col(i), H2.col(j)));
    }
    return out;
}

} // namespace iscat
