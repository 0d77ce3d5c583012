// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "iscat/forward.hpp"
#include "iscat/roi.hpp"

namespace iscat {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

/// Observation container: JSON header (dims, SNR, seed, noise variance)
/// followed by interleaved little-endian re/im doubles of the stacked Y.
void save_observation(const std::string& path, const Observation& obs, int K, int T, int n_rx);
Observation load_observation(const std::string& path, int* K = nullptr, int* T = nullptr,
                             int* n_rx = nullptr);

/// Binary ROI mask as a PGM image (255 inside, 0 outside).
void write_roi_pgm(const std::string& path, const RoiIndexSet& roi);
void write_roi_csv(const std::string& path, const RoiIndexSet& roi);
RoiIndexSet read_roi_csv(const std::string& path);

void write_contrast_csv(const std::string& path, const Eigen::VectorXcd& chi);
Eigen::VectorXcd read_contrast_csv(const std::string& path);

void write_iteration_log_csv(const std::string& path,
                             const std::vector<std::pair<double, double>>& per_iteration);

/// FNV-1a over the exact byte content, for config hashes in manifests.
uint64_t content_hash(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace iscat
