// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "iscat/config.hpp"

namespace iscat {

struct RunRecord {
    std::string id;
    bool ok = true;
    std::string error;
};

struct ExperimentOutcome {
    std::string preset;
    std::vector<RunRecord> records;
    std::vector<std::string> outputs; // files written under out_dir

    bool partial() const {
        for (const auto& r : records)
            if (!r.ok) return true;
        return false;
    }
};

/// Run one figure preset (fig2, fig4, fig5, nmse_roi, nmse_snr); writes the
/// preset CSV, a plot script and a manifest under cfg.out_dir. Individual run
/// cells that fail are recorded and the batch continues.
ExperimentOutcome run_experiment(const std::string& preset, const ExperimentConfig& cfg);

} // namespace iscat
