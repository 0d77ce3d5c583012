// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "iscat/forward.hpp"
#include "iscat/roi.hpp"

namespace iscat {

struct LsmConfig {
    double zeta = 1e-3;   // Tikhonov weight
    double epsilon = 1e-4; // score stabilizer
    double q_trim = 0.05; // tail trim fraction in (0, 1/2]
};

struct LsmResult {
    std::vector<Eigen::MatrixXcd> c_k; // N_t x N per tone
    Eigen::VectorXd indicator;         // J_K, length N
    Eigen::VectorXd scores;            // normalized s_p in [0, 1]
    double eta = 0.0;
    bool degenerate = false; // all-equal indicator; full-domain ROI
};

/// Tikhonov-regularized sampling solve via the N_t x N_t normal equations:
/// c_k = (U_k^H U_k + zeta I)^{-1} U_k^H G2_stacked.
Eigen::MatrixXcd lsm_solve(const Eigen::MatrixXcd& U_k, const Eigen::MatrixXcd& G2_stacked,
                           double zeta);

/// Slot-stacked Green probe 1_T (x) G2_gamma.
Eigen::MatrixXcd stack_slots(const Eigen::MatrixXcd& G2_gamma, int T);

/// Multi-frequency indicator J_K(r) = (1/K) sum_k log10 ||c_k(r)||^2.
Eigen::VectorXd indicator(const std::vector<Eigen::MatrixXcd>& c_list);

/// Trimmed max-gap split on a raw score vector: sort ascending, drop w =
/// ceil(q_trim * N) gaps at each tail, return the midpoint of the widest
/// remaining gap (smallest index wins ties).
double max_gap_eta(const Eigen::VectorXd& scores, double q_trim);

/// Trimmed max-gap threshold on normalized scores (smallest-index tie-break).
/// Returns eta and fills scores; eta = 0 with all-zero scores for an
/// all-equal indicator.
double trimmed_max_gap_threshold(const Eigen::VectorXd& J, double epsilon, double q_trim,
                                 Eigen::VectorXd* scores_out = nullptr);

/// ROI = { p : s_p <= eta }.
RoiIndexSet roi_select(const Eigen::VectorXd& scores, double eta, int grid_side);

/// Full pipeline: multi-static responses -> per-tone solves -> indicator ->
/// threshold -> ROI.
LsmResult lsm_run(const ContrastMap& chi, const SensingSetup& setup, const LsmConfig& cfg,
                  double snr_db, uint64_t seed);

} // namespace iscat
