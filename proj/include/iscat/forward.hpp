// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "iscat/contrast.hpp"
#include "iscat/frequency.hpp"
#include "iscat/geometry.hpp"
#include "iscat/greens.hpp"
#include "iscat/grid.hpp"
#include "iscat/pilots.hpp"

namespace iscat {

/// Tx-to-domain and domain-to-Rx propagation operators at one tone.
/// G2_gamma is the scatterer-to-Rx matrix the sampling method probes against;
/// in free space it coincides with H2.
struct ChannelPair {
    Eigen::MatrixXcd H1;       // N x N_t
    Eigen::MatrixXcd H2;       // N_r x N
    Eigen::MatrixXcd G2_gamma; // N_r x N
};

/// Everything fixed for one sensing configuration: grid, array, comb, pilots
/// and the per-tone propagation channels. Domain Green's matrices are built
/// on demand (full or restricted to a pixel subset).
struct SensingSetup {
    FrequencyGrid freq;
    Grid2D grid;
    ArrayGeometry array;
    PilotBook pilots;
    std::vector<ChannelPair> channels; // one per tone

    Eigen::MatrixXcd greens(int k) const { return greens_domain(grid, freq.wavenumber(k)); }
    Eigen::MatrixXcd greens_block(int k, const std::vector<int>& idx) const {
        return greens_domain_block(grid, freq.wavenumber(k), idx);
    }
};

SensingSetup make_setup(const FrequencyGrid& freq, const Grid2D& grid, const ArrayGeometry& array,
                        const PilotBook& pilots);

struct FieldSet {
    Eigen::MatrixXcd E_i; // N x N_t incident
    Eigen::MatrixXcd E_t; // N x N_t total
    Eigen::MatrixXcd E_s; // N x N_t in-domain scattered
};

/// Solve (I - G diag(chi)) E_t = E_i. Exploits the contrast support: only the
/// supported block is factorized, the full field follows by substitution.
FieldSet total_field_solve(const ContrastMap& chi, const Eigen::MatrixXcd& G,
                           const Eigen::MatrixXcd& E_i);

/// Restricted solve on a pixel subset: (I_P - G_block diag(chi_sub)) E = E_i_sub.
/// Exact whenever the contrast vanishes outside the subset.
Eigen::MatrixXcd total_field_restricted(const Eigen::VectorXcd& chi_sub,
                                        const Eigen::MatrixXcd& G_block,
                                        const Eigen::MatrixXcd& E_i_sub);

/// Stacked pilot observations Y = [y_1; ...; y_K], y_k = [y_{k,1}; ...; y_{k,T}].
struct Observation {
    std::vector<Eigen::VectorXcd> y_k; // T*N_r each
    Eigen::VectorXcd Y;                // K*T*N_r
    double snr_db = 0.0;
    double noise_var = 0.0; // per complex component
    uint64_t seed = 0;
};

/// Circular complex Gaussian noise scaled so total noise energy over the full
/// stack is 10^(-snr_db/10) times the clean energy. Streams are seeded per
/// (tone, slot). snr_db = +inf disables noise.
Eigen::VectorXcd add_observation_noise(const Eigen::VectorXcd& clean, double snr_db, uint64_t seed,
                                       int K, int T, int n_rx, double* noise_var_out = nullptr);

Observation simulate_observations(const ContrastMap& chi, const SensingSetup& setup, double snr_db,
                                  uint64_t seed);

/// One tone of the forward operator A_k = (X^T H1^T (I - G diag chi)^{-T}) o H2.
struct ToneOperator {
    Eigen::MatrixXcd A;  // T*N_r x N
    Eigen::MatrixXcd Et; // N x T total-field factor; row j is u_j^T
    bool born_only = false;
};

struct OperatorBundle {
    std::vector<ToneOperator> tones;
    bool born_only = false;

    Eigen::MatrixXcd stack() const;     // K*T*N_r x N
    Eigen::VectorXd col_norms() const;  // column norms of the stack
};

ToneOperator assemble_operator(const Eigen::VectorXcd& chi_est, const SensingSetup& setup, int k);
OperatorBundle assemble_bundle(const Eigen::VectorXcd& chi_est, const SensingSetup& setup);

/// ROI-restricted assembly: columns of A_k for the subset pixels only, with
/// the resolvent reduced to the subset block (exact for estimates supported
/// there). Ei_sub = H1[idx,:] X_k, H2_cols = H2[:,idx].
Eigen::MatrixXcd assemble_operator_columns(const Eigen::VectorXcd& chi_sub,
                                           const Eigen::MatrixXcd& G_block,
                                           const Eigen::MatrixXcd& E_i_sub,
                                           const Eigen::MatrixXcd& H2_cols);

/// Slot-stacked multi-static response U_k (T*N_r x N_t): column m is
/// 1_T (x) h_{k,m} plus noise at the observation SNR rule.
Eigen::MatrixXcd multistatic_response(const ContrastMap& chi, const SensingSetup& setup, int k,
                                      double snr_db, uint64_t seed);

/// Column-wise Kronecker column u (x) v.
Eigen::VectorXcd khatri_rao_col(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

} // namespace iscat
