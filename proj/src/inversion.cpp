// SPDX-License-Identifier: Apache-2.0
#include "iscat/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iscat/errors.hpp"

namespace iscat {

Eigen::MatrixXd realify(const Eigen::MatrixXcd& A) {
    const Eigen::Index m = A.rows(), n = A.cols();
    Eigen::MatrixXd T(2 * m, 2 * n);
    T.topLeftCorner(m, n) = A.real();
    T.topRightCorner(m, n) = -A.imag();
    T.bottomLeftCorner(m, n) = A.imag();
    T.bottomRightCorner(m, n) = A.real();
    return T;
}

Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
    Eigen::VectorXd r(2 * v.size());
    r.head(v.size()) = v.real();
    r.tail(v.size()) = v.imag();
    return r;
}

Eigen::VectorXcd unrealify(const Eigen::VectorXd& v) {
    if (v.size() % 2 != 0) throw ConfigError("realified vector must have even length");
    const Eigen::Index n = v.size() / 2;
    return v.head(n) + cplx(0.0, 1.0) * v.tail(n);
}

std::pair<Eigen::MatrixXcd, Eigen::VectorXcd> restrict_and_stack(const OperatorBundle& ops,
                                                                 const Observation& obs,
                                                                 const RoiIndexSet& roi) {
    if (roi.P() == 0) throw ConfigError("empty ROI");
    if (ops.tones.empty()) throw ConfigError("operator bundle has no tones");
    const Eigen::Index rows_per_tone = ops.tones.front().A.rows();
    Eigen::MatrixXcd A(rows_per_tone * Eigen::Index(ops.tones.size()), roi.P());
    for (size_t k = 0; k < ops.tones.size(); ++k)
        for (int j = 0; j < roi.P(); ++j)
            A.block(k * rows_per_tone, j, rows_per_tone, 1) =
                ops.tones[k].A.col(roi.indices[j]);
    if (obs.Y.size() != A.rows()) throw ConfigError("observation stack does not match operator");
    return {std::move(A), obs.Y};
}

Eigen::MatrixXd roi_graph_laplacian(const RoiIndexSet& roi) {
    const int P = roi.P(), side = roi.grid_side;
    std::vector<int> pos(side * side, -1);
    for (int j = 0; j < P; ++j) pos[roi.indices[j]] = j;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(P, P);
    for (int j = 0; j < P; ++j) {
        const int r = roi.indices[j] / side, c = roi.indices[j] % side;
        const int nbr[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
        for (auto& [nr, nc] : nbr) {
            if (nr < 0 || nr >= side || nc < 0 || nc >= side) continue;
            const int q = pos[nr * side + nc];
            if (q < 0) continue;
            L(j, q) = -1.0;
            L(j, j) += 1.0;
        }
    }
    return L;
}

static Eigen::MatrixXd regularized_hessian(Eigen::MatrixXd data_term, const Eigen::MatrixXd& L,
                                           double alpha, double beta) {
    const Eigen::Index P = L.rows();
    if (data_term.rows() != 2 * P) throw ConfigError("Laplacian size does not match the ROI");
    data_term.diagonal().array() += alpha;
    data_term.topLeftCorner(P, P) += beta * L;
    data_term.bottomRightCorner(P, P) += beta * L;
    return data_term;
}

QpProblem QpProblem::from_gram(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& c, double y_sq,
                               const Eigen::MatrixXd& L, double alpha, double beta, double lo,
                               double hi) {
    if (alpha < 0.0 || beta < 0.0) throw ConfigError("regularization weights must be nonnegative");
    if (!(lo < hi)) throw ConfigError("box bounds must satisfy lower < upper");
    const Eigen::Index P = Z.rows();
    Eigen::MatrixXd data(2 * P, 2 * P);
    data.topLeftCorner(P, P) = Z.real();
    data.topRightCorner(P, P) = -Z.imag();
    data.bottomLeftCorner(P, P) = Z.imag();
    data.bottomRightCorner(P, P) = Z.real();
    QpProblem qp;
    qp.H = regularized_hessian(std::move(data), L, alpha, beta);
    qp.g = realify(c);
    qp.lower = Eigen::VectorXd::Constant(2 * P, lo);
    qp.upper = Eigen::VectorXd::Constant(2 * P, hi);
    qp.y_sq = y_sq;
    return qp;
}

QpProblem QpProblem::from_operator(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& Y,
                                   const Eigen::MatrixXd& L, double alpha, double beta, double lo,
                                   double hi) {
    return from_gram(A.adjoint() * A, A.adjoint() * Y, Y.squaredNorm(), L, alpha, beta, lo, hi);
}

static double lipschitz_estimate(const Eigen::MatrixXd& H) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(H.rows()).normalized();
    double lam = 0.0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd w = H * v;
        const double nw = w.norm();
        if (nw == 0.0) return 1.0;
        const double lam_new = v.dot(w);
        v = w / nw;
        if (it > 3 && std::abs(lam_new - lam) <= 1e-6 * std::abs(lam_new)) return lam_new;
        lam = lam_new;
    }
    return lam;
}

QpSolution solve_qp(const QpProblem& qp, double tol, int max_iters,
                    const Eigen::VectorXd* warm_start) {
    const auto clamp = [&](Eigen::VectorXd v) {
        return v.cwiseMax(qp.lower).cwiseMin(qp.upper).eval();
    };
    const double L = std::max(lipschitz_estimate(qp.H) * 1.01, 1e-30);
    const double gref = std::max(1.0, qp.g.lpNorm<Eigen::Infinity>());

    QpSolution sol;
    Eigen::VectorXd x = clamp(warm_start && warm_start->size() == qp.dim()
                                  ? *warm_start
                                  : Eigen::VectorXd::Zero(qp.dim()));
    Eigen::VectorXd y = x;
    double t = 1.0;
    for (int it = 1; it <= max_iters; ++it) {
        Eigen::VectorXd x_new = clamp(y - (qp.H * y - qp.g) / L);
        // Adaptive restart on a momentum/descent sign test.
        if ((y - x_new).dot(x_new - x) > 0.0) {
            t = 1.0;
            y = x_new;
        } else {
            const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            y = x_new + ((t - 1.0) / t_new) * (x_new - x);
            t = t_new;
        }
        x = std::move(x_new);
        sol.kkt = (x - clamp(x - (qp.H * x - qp.g))).lpNorm<Eigen::Infinity>() / gref;
        sol.iterations = it;
        if (sol.kkt <= tol) {
            sol.converged = true;
            break;
        }
    }
    if (!sol.converged) {
        std::ostringstream msg;
        msg << "QP did not reach KKT tolerance " << tol << " within " << max_iters
            << " iterations (final residual " << sol.kkt << ")";
        throw NumericalError(msg.str());
    }
    sol.x = std::move(x);
    return sol;
}

namespace {

struct ToneCache {
    Eigen::MatrixXcd G_block; // P x P
    Eigen::MatrixXcd Ei_sub;  // P x T
    Eigen::MatrixXcd H2_cols; // N_r x P
};

std::vector<ToneCache> build_tone_caches(const SensingSetup& setup, const RoiIndexSet& roi) {
    std::vector<ToneCache> caches(setup.freq.K);
    const int P = roi.P();
    for (int k = 0; k < setup.freq.K; ++k) {
        auto& tc = caches[k];
        tc.G_block = setup.greens_block(k, roi.indices);
        const auto& ch = setup.channels[k];
        Eigen::MatrixXcd H1_sub(P, ch.H1.cols());
        tc.H2_cols.resize(ch.H2.rows(), P);
        for (int j = 0; j < P; ++j) {
            H1_sub.row(j) = ch.H1.row(roi.indices[j]);
            tc.H2_cols.col(j) = ch.H2.col(roi.indices[j]);
        }
        tc.Ei_sub = H1_sub * setup.pilots.X[k];
    }
    return caches;
}

Eigen::VectorXcd embed(const Eigen::VectorXcd& chi_sub, const RoiIndexSet& roi, int n_total) {
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(n_total);
    for (int j = 0; j < roi.P(); ++j) full[roi.indices[j]] = chi_sub[j];
    return full;
}

double gram_residual(double y_sq, const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& c,
                     const Eigen::VectorXcd& x) {
    const double r2 = y_sq - 2.0 * x.dot(c).real() + (x.adjoint() * Z * x)(0).real();
    return std::sqrt(std::max(r2, 0.0));
}

// Accumulate the complex normal-equation pieces for the current linearization.
void accumulate_gram(const Eigen::VectorXcd& chi_sub, const SensingSetup& setup,
                     const std::vector<ToneCache>& caches, const Observation& obs,
                     Eigen::MatrixXcd& Z, Eigen::VectorXcd& c) {
    const int P = static_cast<int>(chi_sub.size());
    Z.setZero(P, P);
    c.setZero(P);
    for (int k = 0; k < setup.freq.K; ++k) {
        const auto& tc = caches[k];
        const Eigen::MatrixXcd A_k =
            assemble_operator_columns(chi_sub, tc.G_block, tc.Ei_sub, tc.H2_cols);
        Z.noalias() += A_k.adjoint() * A_k;
        c.noalias() += A_k.adjoint() * obs.y_k[k];
    }
}

} // namespace

ReconstructionResult roi_qp_reconstruct(const Observation& obs, const SensingSetup& setup,
                                        const RoiIndexSet& roi, const InversionConfig& cfg) {
    if (roi.P() == 0) throw ConfigError("empty ROI");
    if (cfg.max_born < 1) throw ConfigError("Born iteration count must be at least 1");
    const int P = roi.P();
    const auto caches = build_tone_caches(setup, roi);
    const Eigen::MatrixXd L = roi_graph_laplacian(roi);
    const double y_sq = obs.Y.squaredNorm();

    ReconstructionResult res;
    Eigen::VectorXcd chi_sub = Eigen::VectorXcd::Zero(P);
    Eigen::MatrixXcd Z;
    Eigen::VectorXcd c;
    for (int n = 1; n <= cfg.max_born; ++n) {
        accumulate_gram(chi_sub, setup, caches, obs, Z, c);
        // alpha/beta are relative weights; the mean squared column norm puts
        // them on the data term's scale regardless of frequency or geometry.
        const double scale = std::max(Z.trace().real() / P, 1e-300);
        QpProblem qp = QpProblem::from_gram(Z, c, y_sq, L, cfg.alpha * scale, cfg.beta * scale,
                                            cfg.lower, cfg.upper);
        Eigen::VectorXcd chi_new;
        const Eigen::VectorXd warm = realify(chi_sub);
        try {
            chi_new = unrealify(solve_qp(qp, cfg.qp_tol, cfg.qp_max_iters, &warm).x);
        } catch (const NumericalError& e) {
            res.diagnostics = e.what();
            break;
        }
        const double delta = (chi_new - chi_sub).norm();
        const double prev_norm = chi_sub.norm();
        res.per_iteration.emplace_back(gram_residual(y_sq, Z, c, chi_new), delta);
        res.iterations_used = n;
        chi_sub = std::move(chi_new);
        if (n > 1 && delta <= cfg.tau_err * prev_norm) {
            res.converged = true;
            break;
        }
    }
    res.chi_hat = embed(chi_sub, roi, static_cast<int>(setup.grid.size()));
    return res;
}

ReconstructionResult tikhonov_bim(const Observation& obs, const SensingSetup& setup,
                                  const RoiIndexSet& roi, const BimConfig& cfg) {
    if (roi.P() == 0) throw ConfigError("empty ROI");
    if (cfg.max_born < 1) throw ConfigError("Born iteration count must be at least 1");
    const int P = roi.P();
    const auto caches = build_tone_caches(setup, roi);
    const double y_sq = obs.Y.squaredNorm();

    ReconstructionResult res;
    Eigen::VectorXcd chi_sub = Eigen::VectorXcd::Zero(P);
    Eigen::MatrixXcd Z;
    Eigen::VectorXcd c;
    double lambda = cfg.lambda;
    for (int n = 1; n <= cfg.max_born; ++n) {
        accumulate_gram(chi_sub, setup, caches, obs, Z, c);
        if (lambda <= 0.0) {
            // 7-point log grid spanning [1e-6, 1] times the Gram scale.
            const double scale = std::max(Z.trace().real() / P, 1e-300);
            std::vector<double> cand(7);
            for (int i = 0; i < 7; ++i) cand[i] = std::pow(10.0, -6.0 + i) * scale;
            std::vector<std::pair<double, double>> pts;
            for (double lam : cand) {
                Eigen::MatrixXcd M = Z;
                M.diagonal().array() += lam;
                const Eigen::VectorXcd x = Eigen::LDLT<Eigen::MatrixXcd>(M).solve(c);
                pts.emplace_back(gram_residual(y_sq, Z, c, x), x.norm());
            }
            lambda = lcurve_select_points(cand, pts);
        }
        Eigen::MatrixXcd M = Z;
        M.diagonal().array() += lambda;
        Eigen::VectorXcd chi_new = Eigen::LDLT<Eigen::MatrixXcd>(M).solve(c);
        const double delta = (chi_new - chi_sub).norm();
        const double prev_norm = chi_sub.norm();
        res.per_iteration.emplace_back(gram_residual(y_sq, Z, c, chi_new), delta);
        res.iterations_used = n;
        chi_sub = std::move(chi_new);
        if (n > 1 && delta <= cfg.tau_err * prev_norm) {
            res.converged = true;
            break;
        }
    }
    res.chi_hat = embed(chi_sub, roi, static_cast<int>(setup.grid.size()));
    std::ostringstream d;
    d << "lambda=" << lambda;
    res.diagnostics = d.str();
    return res;
}

double lcurve_select_points(const std::vector<double>& candidates,
                            const std::vector<std::pair<double, double>>& res_sol) {
    if (candidates.empty()) throw ConfigError("L-curve needs at least one candidate");
    if (candidates.size() != res_sol.size())
        throw ConfigError("candidate / point count mismatch");
    if (candidates.size() == 1) return candidates.front();
    if (candidates.size() == 2) throw ConfigError("L-curve needs one or at least three candidates");

    const int n = static_cast<int>(candidates.size());
    std::vector<double> x(n), y(n); // (log residual, log solution norm)
    for (int i = 0; i < n; ++i) {
        x[i] = std::log10(std::max(res_sol[i].first, 1e-300));
        y[i] = std::log10(std::max(res_sol[i].second, 1e-300));
    }
    // Finite-difference curvature in the log-lambda parameter at interior
    // nodes; the corner is the largest-magnitude curvature.
    double best_kappa = 0.0;
    int best = -1;
    for (int i = 1; i + 1 < n; ++i) {
        const double hl = std::log10(candidates[i]) - std::log10(candidates[i - 1]);
        const double hr = std::log10(candidates[i + 1]) - std::log10(candidates[i]);
        if (hl <= 0.0 || hr <= 0.0) throw ConfigError("candidates must be increasing");
        const double xp = (x[i + 1] - x[i - 1]) / (hl + hr);
        const double yp = (y[i + 1] - y[i - 1]) / (hl + hr);
        const double xpp = 2.0 * (hl * x[i + 1] - (hl + hr) * x[i] + hr * x[i - 1]) /
                           (hl * hr * (hl + hr));
        const double ypp = 2.0 * (hl * y[i + 1] - (hl + hr) * y[i] + hr * y[i - 1]) /
                           (hl * hr * (hl + hr));
        const double speed = std::pow(xp * xp + yp * yp, 1.5);
        if (speed <= 1e-300) continue;
        const double kappa = std::abs(xp * ypp - yp * xpp) / speed;
        if (std::isfinite(kappa) && kappa > best_kappa) {
            best_kappa = kappa;
            best = i;
        }
    }
    if (best >= 0 && best_kappa > 1e-8) return candidates[best];

    // Flat curve: smallest residual among candidates whose solution norm is
    // within 10% of the minimum.
    double min_sol = std::numeric_limits<double>::infinity();
    for (const auto& p : res_sol) min_sol = std::min(min_sol, p.second);
    int pick = -1;
    double pick_res = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (res_sol[i].second <= 1.1 * min_sol && res_sol[i].first < pick_res) {
            pick_res = res_sol[i].first;
            pick = i;
        }
    return candidates[pick];
}

double lcurve_select(const Eigen::MatrixXcd& A_sub, const Eigen::VectorXcd& Y,
                     const std::vector<double>& candidates) {
    const Eigen::MatrixXcd Z = A_sub.adjoint() * A_sub;
    const Eigen::VectorXcd c = A_sub.adjoint() * Y;
    const double y_sq = Y.squaredNorm();
    std::vector<std::pair<double, double>> pts;
    for (double lam : candidates) {
        Eigen::MatrixXcd M = Z;
        M.diagonal().array() += lam;
        const Eigen::VectorXcd x = Eigen::LDLT<Eigen::MatrixXcd>(M).solve(c);
        pts.emplace_back(gram_residual(y_sq, Z, c, x), x.norm());
    }
    return lcurve_select_points(candidates, pts);
}

} // namespace iscat
