// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "iscat/forward.hpp"
#include "iscat/roi.hpp"

namespace iscat {

struct SpectralReport {
    Eigen::VectorXd singular_values; // descending
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    double kappa = 0.0; // +inf when sigma_min = 0
};

/// Full singular spectrum; tall operators go through QR first so only the
/// square factor is bidiagonalized.
SpectralReport spectral_report(const Eigen::MatrixXcd& A_sub);

struct CoherenceReport {
    Eigen::MatrixXd ncc;        // |mu_ij|, unit diagonal
    double mu_eff = 0.0;        // max off-diagonal
    Eigen::VectorXd gersh_radii;
    double r_max = 0.0;
    double lambda_lo = 0.0, lambda_hi = 0.0; // 1 -/+ R_max
    double sigma_min = 0.0, sigma_max = 0.0; // of the column-normalized operator
    double kappa = 0.0;
    double kappa_bound = 0.0; // sqrt((1+(P-1)mu)/(1-(P-1)mu))
    bool bound_valid = false; // (P-1) mu_eff < 1
};

CoherenceReport ncc_report(const Eigen::MatrixXcd& A_sub);

struct CoherenceSplit {
    double air_mean = 0.0, air_max = 0.0;
    double asr_mean = 0.0, asr_max = 0.0;
    double cross_mean = 0.0, cross_max = 0.0;
};

/// Mean/max normalized column correlation over air-air, scatterer-scatterer
/// and cross pixel pairs of the stacked operator.
CoherenceSplit coherence_split(const Eigen::MatrixXcd& A_full, const std::vector<int>& true_support);

struct RoiQuality {
    double recall = 0.0;
    double precision = 0.0;
    int tau = 0;    // |ROI intersect support|
    int n_fp = 0;   // |ROI \ support|
    int k_true = 0; // |support|
};

RoiQuality roi_quality(const RoiIndexSet& roi, const std::vector<int>& true_support);

struct MismatchBound {
    double xi = 0.0;
    double kappa_max = 0.0; // +inf when invalid
    bool valid = false;     // xi < 1
    double p_effective = 0.0;
    double deriv_ratio = 0.0; // d ln kappa_max/d mu_eff over d ln kappa_max/d xi = P - 1
};

MismatchBound condition_bound_from_mismatch(double mu_eff, double recall, double precision,
                                            int k_true);

struct CrlbReport {
    double lambda_min_Z = 0.0;
    double crlb_spectral = 0.0;    // sigma_n^2 / lambda_min(A^H A)
    double crlb_upper_bound = 0.0; // sigma_n^2 / (d_min^2 (1 - (P-1) mu_eff))
    double d_min = 0.0;
    double mu_eff = 0.0;
    bool chain_valid = false;
};

CrlbReport crlb_report(const Eigen::MatrixXcd& A_sub, double noise_var);

struct PhaseMixingRun {
    std::vector<int> K_values;
    double threshold = 0.25;
    int trials = 0;
    std::vector<double> empirical_prob; // P(|zbar| <= threshold)
    std::vector<double> markov_bound;   // 1 - 1/(K threshold^2)
    std::vector<double> mean_sq_zbar;   // ~ 1/K
};

/// Random-phase model by default; the optional per-tone geometric phases are
/// added to the drawn uniform phases.
PhaseMixingRun phase_mixing_mc(const std::vector<int>& K_values, double threshold, int trials,
                               uint64_t seed, const std::vector<double>* varphi = nullptr);

struct EffectivePhase {
    double varphi = 0.0;  // arg of the asymptotic phasor sum
    cplx asymptotic_sum;  // sum_m alpha_m exp(-j phi_ij(r_m))
    cplx exact_sum;       // sum_m G(r_m,r_i)^* G(r_m,r_j) over the same pixels
    cplx remainder;       // exact - asymptotic (empirical Delta)
};

/// Geometry-induced effective phase between in-domain Green columns i, j over
/// the scatterer pixel set asr; self pixels are skipped (the asymptotic weight
/// is singular there).
EffectivePhase effective_phase(const Grid2D& grid, const std::vector<int>& asr, int i, int j,
                               double k_b);

struct AirCoherenceBound {
    cplx gamma, rho;   // best complex scalings u_j ~ gamma u_i, v_j ~ rho v_i
    double eps_u = 0.0, eps_v = 0.0;
    double delta_ij = 0.0;
    double lower_bound = 0.0;
    double observed_mu = 0.0;
};

AirCoherenceBound air_coherence_bound(const Eigen::VectorXcd& u_i, const Eigen::VectorXcd& u_j,
                                      const Eigen::VectorXcd& v_i, const Eigen::VectorXcd& v_j);

/// Pairwise bounds from one tone's Khatri-Rao factors: u from the total-field
/// rows, v from the Rx channel columns.
std::vector<AirCoherenceBound> air_coherence_bounds(const ToneOperator& op,
                                                    const Eigen::MatrixXcd& H2,
                                                    const std::vector<std::pair<int, int>>& pairs);

} // namespace iscat
