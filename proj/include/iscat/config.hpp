// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iscat/forward.hpp"
#include "iscat/inversion.hpp"
#include "iscat/lsm.hpp"

namespace iscat {

/// Declarative run description; defaults follow the reference setup (28 GHz,
/// 32 tones at 100 MHz, 60x60 UCA at 10 m, 36 px / 1.8 m grid).
struct ExperimentConfig {
    // [scene]
    std::string scene = "circle";
    int grid_pixels = 36;
    double extent_m = 1.8;
    // [array]
    double radius_m = 10.0;
    int n_tx = 60;
    int n_rx = 60;
    // [frequencies]
    double f_c = 28e9;
    double delta_f = 100e6;
    int K = 32;
    // [pilots]
    int T = 8;
    uint64_t pilot_seed = 1;
    // [lsm]
    LsmConfig lsm;
    // [inversion]
    InversionConfig inversion;
    // [experiment]
    std::vector<double> snr_db{30.0};
    std::string roi_mode = "lsm"; // lsm | schedule | full | oracle
    uint64_t noise_seed = 7;
    int trials = 1;
    std::string out_dir = "out";
    int schedule_l_max = 36;
    int schedule_l_min = 20;
    int schedule_steps = 5;
};

/// Parse the INI-style text ([section] headers, key = value, '#'/';'
/// comments). Unknown sections or keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical key = value rendering; hashing this ties manifests to configs.
std::string config_summary(const ExperimentConfig& cfg);

FrequencyGrid frequency_grid_from_config(const ExperimentConfig& cfg);
SensingSetup setup_from_config(const ExperimentConfig& cfg);

} // namespace iscat
