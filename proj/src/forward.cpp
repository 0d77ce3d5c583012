// SPDX-License-Identifier: Apache-2.0
#include "iscat/forward.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "iscat/errors.hpp"
#include "iscat/rng.hpp"

namespace iscat {

namespace {

// Power iteration on M^{-1} M^{-H} through the factorization; returns an
// estimate of sigma_max(M^{-1}).
double inverse_norm_estimate(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, int n) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n) / std::sqrt(double(n));
    double est = 0.0;
    for (int it = 0; it < 6; ++it) {
        Eigen::VectorXcd y = lu.solve(x);
        Eigen::VectorXcd z = lu.adjoint().solve(y);
        const double zn = z.norm();
        if (!(zn > 0.0) || !std::isfinite(zn)) return std::numeric_limits<double>::infinity();
        est = std::sqrt(zn);
        x = z / zn;
    }
    return est;
}

Eigen::PartialPivLU<Eigen::MatrixXcd> factorize_checked(const Eigen::MatrixXcd& M) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    const double norm_bound = std::sqrt(M.cwiseAbs().colwise().sum().maxCoeff() *
                                        M.cwiseAbs().rowwise().sum().maxCoeff());
    const double inv_norm = inverse_norm_estimate(lu, static_cast<int>(M.rows()));
    const double rcond = 1.0 / (norm_bound * inv_norm);
    if (!(rcond > 1e-14)) {
        std::ostringstream msg;
        msg << "total-field system is near singular (estimated rcond " << rcond
            << "); contrast close to an interior resonance";
        throw NumericalError(msg.str());
    }
    return lu;
}

} // namespace

SensingSetup make_setup(const FrequencyGrid& freq, const Grid2D& grid, const ArrayGeometry& array,
                        const PilotBook& pilots) {
    if (pilots.K != freq.K) throw ConfigError("pilot book tone count must match the frequency grid");
    if (pilots.n_tx != array.n_tx) throw ConfigError("pilot book rows must match the Tx count");
    const double circum = 0.5 * grid.extent_m * std::sqrt(2.0);
    if (array.radius_m <= circum)
        throw ConfigError("array radius must exceed the grid's circumscribed radius");

    SensingSetup s{freq, grid, array, pilots, {}};
    s.channels.reserve(freq.K);
    for (int k = 0; k < freq.K; ++k) {
        const double kb = freq.wavenumber(k);
        ChannelPair ch;
        ch.H1 = greens_obs(array.tx_positions, grid.centers, kb);
        ch.H2 = greens_obs(grid.centers, array.rx_positions, kb, grid.cell_area);
        ch.G2_gamma = ch.H2; // free space
        s.channels.push_back(std::move(ch));
    }
    return s;
}

Eigen::MatrixXcd total_field_restricted(const Eigen::VectorXcd& chi_sub,
                                        const Eigen::MatrixXcd& G_block,
                                        const Eigen::MatrixXcd& E_i_sub) {
    const int p = static_cast<int>(chi_sub.size());
    if (p == 0) return E_i_sub;
    Eigen::MatrixXcd M = -G_block * chi_sub.asDiagonal();
    M.diagonal().array() += 1.0;
    auto lu = factorize_checked(M);
    Eigen::MatrixXcd Et = lu.solve(E_i_sub);
    // One refinement step, then enforce the residual contract.
    const double ei_norm = E_i_sub.norm();
    Eigen::MatrixXcd R = E_i_sub - M * Et;
    if (R.norm() > 1e-12 * ei_norm) Et += lu.solve(R);
    R.noalias() = E_i_sub - M * Et;
    if (R.norm() > 1e-10 * ei_norm)
        throw NumericalError("total-field solve residual exceeds 1e-10 of the incident field");
    return Et;
}

FieldSet total_field_solve(const ContrastMap& chi, const Eigen::MatrixXcd& G,
                           const Eigen::MatrixXcd& E_i) {
    const int n = static_cast<int>(E_i.rows());
    if (G.rows() != n || G.cols() != n) throw ConfigError("Green matrix / field shape mismatch");

    FieldSet f;
    f.E_i = E_i;
    const std::vector<int> supp = contrast_support(chi.chi);
    if (supp.empty()) {
        f.E_t = E_i;
        f.E_s = Eigen::MatrixXcd::Zero(n, E_i.cols());
        return f;
    }
    const int p = static_cast<int>(supp.size());
    Eigen::VectorXcd chi_sub(p);
    Eigen::MatrixXcd G_cols(n, p), Ei_sub(p, E_i.cols());
    for (int j = 0; j < p; ++j) {
        chi_sub[j] = chi.chi[supp[j]];
        G_cols.col(j) = G.col(supp[j]);
        Ei_sub.row(j) = E_i.row(supp[j]);
    }
    Eigen::MatrixXcd G_block(p, p);
    for (int i = 0; i < p; ++i) G_block.row(i) = G_cols.row(supp[i]);

    const Eigen::MatrixXcd Et_sub = total_field_restricted(chi_sub, G_block, Ei_sub);
    f.E_s.noalias() = G_cols * (chi_sub.asDiagonal() * Et_sub);
    f.E_t = E_i + f.E_s;
    return f;
}

Eigen::VectorXcd add_observation_noise(const Eigen::VectorXcd& clean, double snr_db, uint64_t seed,
                                       int K, int T, int n_rx, double* noise_var_out) {
    if (clean.size() != static_cast<Eigen::Index>(K) * T * n_rx)
        throw ConfigError("observation length does not match K*T*N_r");
    if (std::isinf(snr_db)) {
        if (noise_var_out) *noise_var_out = 0.0;
        return clean;
    }
    const double energy = clean.squaredNorm();
    // Zero-signal fallback: scale against a unit-energy reference.
    const double ref = energy > 0.0 ? energy / clean.size() : 1.0;
    const double var = ref * std::pow(10.0, -snr_db / 10.0);
    if (noise_var_out) *noise_var_out = var;

    Eigen::VectorXcd noisy = clean;
    const double s = std::sqrt(0.5 * var);
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t) {
            auto rng = make_rng(seed, k, t);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const Eigen::Index base = (static_cast<Eigen::Index>(k) * T + t) * n_rx;
            for (int r = 0; r < n_rx; ++r)
                noisy[base + r] += cplx(s * gauss(rng), s * gauss(rng));
        }
    return noisy;
}

Observation simulate_observations(const ContrastMap& chi, const SensingSetup& setup, double snr_db,
                                  uint64_t seed) {
    const int K = setup.freq.K;
    const int T = setup.pilots.T;
    const int n_rx = setup.array.n_rx;
    const std::vector<int> supp = contrast_support(chi.chi);
    const int p = static_cast<int>(supp.size());

    Eigen::VectorXcd chi_sub(p);
    for (int j = 0; j < p; ++j) chi_sub[j] = chi.chi[supp[j]];

    Observation obs;
    obs.snr_db = snr_db;
    obs.seed = seed;
    obs.Y.resize(static_cast<Eigen::Index>(K) * T * n_rx);
    obs.y_k.resize(K);
    for (int k = 0; k < K; ++k) {
        Eigen::VectorXcd yk = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(T) * n_rx);
        if (p > 0) {
            const auto& ch = setup.channels[k];
            Eigen::MatrixXcd Ei_sub(p, T), H2_cols(n_rx, p);
            {
                Eigen::MatrixXcd H1_rows(p, setup.array.n_tx);
                for (int j = 0; j < p; ++j) {
                    H1_rows.row(j) = ch.H1.row(supp[j]);
                    H2_cols.col(j) = ch.H2.col(supp[j]);
                }
                Ei_sub.noalias() = H1_rows * setup.pilots.X[k];
            }
            const Eigen::MatrixXcd G_block = setup.greens_block(k, supp);
            const Eigen::MatrixXcd Et_sub = total_field_restricted(chi_sub, G_block, Ei_sub);
            for (int t = 0; t < T; ++t)
                yk.segment(static_cast<Eigen::Index>(t) * n_rx, n_rx).noalias() =
                    H2_cols * chi_sub.cwiseProduct(Et_sub.col(t));
        }
        obs.Y.segment(static_cast<Eigen::Index>(k) * T * n_rx, static_cast<Eigen::Index>(T) * n_rx) = yk;
        obs.y_k[k] = std::move(yk);
    }
    obs.Y = add_observation_noise(obs.Y, snr_db, seed, K, T, n_rx, &obs.noise_var);
    for (int k = 0; k < K; ++k)
        obs.y_k[k] = obs.Y.segment(static_cast<Eigen::Index>(k) * T * n_rx,
                                   static_cast<Eigen::Index>(T) * n_rx);
    return obs;
}

Eigen::VectorXcd khatri_rao_col(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(u.size() * v.size());
    for (Eigen::Index t = 0; t < u.size(); ++t) out.segment(t * v.size(), v.size()) = u[t] * v;
    return out;
}

namespace {

// A[:,j] = Et.row(j)^T (x) H2.col(j) for every requested column.
Eigen::MatrixXcd khatri_rao_operator(const Eigen::MatrixXcd& Et, const Eigen::MatrixXcd& H2_cols) {
    const Eigen::Index T = Et.cols(), n_rx = H2_cols.rows(), n_cols = H2_cols.cols();
    Eigen::MatrixXcd A(T * n_rx, n_cols);
    for (Eigen::Index j = 0; j < n_cols; ++j)
        for (Eigen::Index t = 0; t < T; ++t)
            A.col(j).segment(t * n_rx, n_rx) = Et(j, t) * H2_cols.col(j);
    return A;
}

} // namespace

ToneOperator assemble_operator(const Eigen::VectorXcd& chi_est, const SensingSetup& setup, int k) {
    const auto& ch = setup.channels[k];
    const int n = setup.grid.size();
    const int T = setup.pilots.T;

    ToneOperator op;
    const std::vector<int> supp = contrast_support(chi_est);
    op.born_only = supp.empty();
    if (op.born_only) {
        op.Et.noalias() = ch.H1 * setup.pilots.X[k];
    } else {
        // Solve on the supported block, then extend to all pixels.
        const int p = static_cast<int>(supp.size());
        Eigen::VectorXcd chi_sub(p);
        Eigen::MatrixXcd Ei(n, T), Ei_sub(p, T);
        Ei.noalias() = ch.H1 * setup.pilots.X[k];
        for (int j = 0; j < p; ++j) {
            chi_sub[j] = chi_est[supp[j]];
            Ei_sub.row(j) = Ei.row(supp[j]);
        }
        const Eigen::MatrixXcd G_block = setup.greens_block(k, supp);
        const Eigen::MatrixXcd Et_sub = total_field_restricted(chi_sub, G_block, Ei_sub);

        const double kb = setup.freq.wavenumber(k);
        const Eigen::MatrixXcd G_cols = greens_domain_cols(setup.grid, kb, supp);

        op.Et = Ei;
        op.Et.noalias() += G_cols * (chi_sub.asDiagonal() * Et_sub);
    }
    op.A = khatri_rao_operator(op.Et, ch.H2);
    return op;
}

OperatorBundle assemble_bundle(const Eigen::VectorXcd& chi_est, const SensingSetup& setup) {
    OperatorBundle b;
    b.tones.reserve(setup.freq.K);
    for (int k = 0; k < setup.freq.K; ++k) b.tones.push_back(assemble_operator(chi_est, setup, k));
    b.born_only = b.tones.empty() ? true : b.tones.front().born_only;
    return b;
}

Eigen::MatrixXcd OperatorBundle::stack() const {
    if (tones.empty()) return {};
    const Eigen::Index rows = tones.front().A.rows(), cols = tones.front().A.cols();
    Eigen::MatrixXcd S(rows * static_cast<Eigen::Index>(tones.size()), cols);
    for (size_t k = 0; k < tones.size(); ++k) S.middleRows(k * rows, rows) = tones[k].A;
    return S;
}

Eigen::VectorXd OperatorBundle::col_norms() const {
    if (tones.empty()) return {};
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(tones.front().A.cols());
    for (const auto& t : tones) sq += t.A.colwise().squaredNorm().real().transpose();
    return sq.cwiseSqrt();
}

Eigen::MatrixXcd assemble_operator_columns(const Eigen::VectorXcd& chi_sub,
                                           const Eigen::MatrixXcd& G_block,
                                           const Eigen::MatrixXcd& E_i_sub,
                                           const Eigen::MatrixXcd& H2_cols) {
    const Eigen::MatrixXcd Et_sub = total_field_restricted(chi_sub, G_block, E_i_sub);
    return khatri_rao_operator(Et_sub, H2_cols);
}

Eigen::MatrixXcd multistatic_response(const ContrastMap& chi, const SensingSetup& setup, int k,
                                      double snr_db, uint64_t seed) {
    const auto& ch = setup.channels[k];
    const int T = setup.pilots.T;
    const int n_rx = setup.array.n_rx;
    const int n_tx = setup.array.n_tx;

    Eigen::MatrixXcd resp = Eigen::MatrixXcd::Zero(n_rx, n_tx);
    const std::vector<int> supp = contrast_support(chi.chi);
    if (!supp.empty()) {
        const int p = static_cast<int>(supp.size());
        Eigen::VectorXcd chi_sub(p);
        Eigen::MatrixXcd H1_rows(p, n_tx), H2_cols(n_rx, p);
        for (int j = 0; j < p; ++j) {
            chi_sub[j] = chi.chi[supp[j]];
            H1_rows.row(j) = ch.H1.row(supp[j]);
            H2_cols.col(j) = ch.H2.col(supp[j]);
        }
        const Eigen::MatrixXcd G_block = setup.greens_block(k, supp);
        const Eigen::MatrixXcd Et0 = total_field_restricted(chi_sub, G_block, H1_rows);
        resp.noalias() = H2_cols * (chi_sub.asDiagonal() * Et0);
    }

    Eigen::MatrixXcd U(static_cast<Eigen::Index>(T) * n_rx, n_tx);
    for (int t = 0; t < T; ++t) U.middleRows(static_cast<Eigen::Index>(t) * n_rx, n_rx) = resp;

    if (!std::isinf(snr_db)) {
        const double energy = U.squaredNorm();
        const double ref = energy > 0.0 ? energy / double(U.size()) : 1.0;
        const double var = ref * std::pow(10.0, -snr_db / 10.0);
        const double s = std::sqrt(0.5 * var);
        auto rng = make_rng(seed, 0x6d756c7469ULL, k); // multistatic stream per tone
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (Eigen::Index m = 0; m < U.cols(); ++m)
            for (Eigen::Index i = 0; i < U.rows(); ++i)
                U(i, m) += cplx(s * gauss(rng), s * gauss(rng));
    }
    return U;
}

} // namespace iscat
