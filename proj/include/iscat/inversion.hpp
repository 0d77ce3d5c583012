// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "iscat/forward.hpp"
#include "iscat/roi.hpp"

namespace iscat {

/// [[Re, -Im], [Im, Re]] block form; preserves residual norms for paired
/// vectors [Re x; Im x].
Eigen::MatrixXd realify(const Eigen::MatrixXcd& A);
Eigen::VectorXd realify(const Eigen::VectorXcd& v);
Eigen::VectorXcd unrealify(const Eigen::VectorXd& v);

/// Tone-major row stack of the per-tone operators, columns restricted to the
/// ROI, paired with the matching observation stack.
std::pair<Eigen::MatrixXcd, Eigen::VectorXcd> restrict_and_stack(const OperatorBundle& ops,
                                                                 const Observation& obs,
                                                                 const RoiIndexSet& roi);

/// 4-neighbor unit-weight graph Laplacian L_R = Q - B over the ROI pixels.
Eigen::MatrixXd roi_graph_laplacian(const RoiIndexSet& roi);

/// Reduced box-constrained quadratic: minimize 1/2 x'Hx - g'x over [lower,
/// upper], with H = A~'A~ + alpha I + beta blkdiag(L, L). y_sq carries ||Y||^2
/// so the data residual can be reported without the row stack.
struct QpProblem {
    Eigen::MatrixXd H;
    Eigen::VectorXd g;
    Eigen::VectorXd lower, upper;
    double y_sq = 0.0;

    static QpProblem from_operator(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& Y,
                                   const Eigen::MatrixXd& L, double alpha, double beta, double lo,
                                   double hi);
    static QpProblem from_gram(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& c, double y_sq,
                               const Eigen::MatrixXd& L, double alpha, double beta, double lo,
                               double hi);

    int dim() const { return static_cast<int>(g.size()); }
};

struct QpSolution {
    Eigen::VectorXd x;
    double kkt = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Accelerated projected gradient (FISTA with adaptive restart); stops when
/// the projected-gradient KKT residual falls below tol (relative) or at the
/// iteration cap, in which case it throws with the final residual.
QpSolution solve_qp(const QpProblem& qp, double tol = 1e-8, int max_iters = 10000,
                    const Eigen::VectorXd* warm_start = nullptr);

/// alpha and beta are relative weights: inside the Born loop they are
/// multiplied by the Gram matrix's mean diagonal (mean squared column norm),
/// so the same numbers behave consistently across frequencies and ROIs.
struct InversionConfig {
    double alpha = 1e-3;
    double beta = 1e-4;
    double lower = -10.0;
    double upper = 10.0;
    double tau_err = 1e-4; // relative Born update threshold
    int max_born = 10;     // M
    double qp_tol = 1e-8;
    int qp_max_iters = 10000;
};

struct ReconstructionResult {
    Eigen::VectorXcd chi_hat;                             // length N, zero off the ROI
    std::vector<std::pair<double, double>> per_iteration; // (residual, update norm)
    int iterations_used = 0;
    bool converged = false;
    std::string diagnostics;
};

/// ROI-constrained QP Born iteration: the ROI is frozen, each pass
/// re-linearizes the operator at the current estimate, solves the box QP and
/// nulls the background.
ReconstructionResult roi_qp_reconstruct(const Observation& obs, const SensingSetup& setup,
                                        const RoiIndexSet& roi, const InversionConfig& cfg);

struct BimConfig {
    double lambda = -1.0; // <= 0: pick by L-curve at the first iteration
    double tau_err = 1e-4;
    int max_born = 10;
};

/// Tikhonov-regularized Born iteration baseline, complex-domain normal
/// equations per pass; supports full-domain or ROI-restricted runs.
ReconstructionResult tikhonov_bim(const Observation& obs, const SensingSetup& setup,
                                  const RoiIndexSet& roi, const BimConfig& cfg);

/// Max-curvature pick on the (log residual, log solution norm) curve of the
/// Tikhonov family; flat curves fall back to the smallest residual among
/// candidates within 10% of the minimum solution norm.
double lcurve_select(const Eigen::MatrixXcd& A_sub, const Eigen::VectorXcd& Y,
                     const std::vector<double>& candidates);

/// Same rule on precomputed (residual, solution norm) pairs.
double lcurve_select_points(const std::vector<double>& candidates,
                            const std::vector<std::pair<double, double>>& res_sol);

} // namespace iscat
