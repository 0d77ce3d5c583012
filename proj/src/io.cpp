// SPDX-License-Identifier: Apache-2.0
#include "iscat/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "iscat/errors.hpp"

namespace iscat {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(path, mode);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    return f;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream f(path, mode);
    if (!f) throw ConfigError("cannot read '" + path + "'");
    return f;
}

} // namespace

void write_csv(const std::string& path, const CsvTable& table) {
    auto f = open_out(path);
    f << std::setprecision(17);
    for (size_t i = 0; i < table.header.size(); ++i)
        f << (i ? "," : "") << table.header[i];
    f << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw ConfigError("CSV row width does not match the header");
        for (size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
        f << '\n';
    }
}

CsvTable read_csv(const std::string& path) {
    auto f = open_in(path);
    CsvTable table;
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty CSV '" + path + "'");
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) table.header.push_back(cell);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        for (std::string cell; std::getline(rs, cell, ',');) row.push_back(std::stod(cell));
        if (row.size() != table.header.size())
            throw ConfigError("malformed CSV row in '" + path + "'");
        table.rows.push_back(std::move(row));
    }
    return table;
}

void save_observation(const std::string& path, const Observation& obs, int K, int T, int n_rx) {
    nlohmann::json hdr{{"format", "iscat-observation-v1"},
                       {"K", K},
                       {"T", T},
                       {"n_rx", n_rx},
                       {"snr_db", obs.snr_db},
                       {"noise_var", obs.noise_var},
                       {"seed", obs.seed}};
    const std::string hs = hdr.dump();
    auto f = open_out(path, std::ios::binary);
    const uint64_t hlen = hs.size();
    f.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    for (Eigen::Index i = 0; i < obs.Y.size(); ++i) {
        const double re = obs.Y[i].real(), im = obs.Y[i].imag();
        f.write(reinterpret_cast<const char*>(&re), sizeof(re));
        f.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
}

Observation load_observation(const std::string& path, int* K, int* T, int* n_rx) {
    auto f = open_in(path, std::ios::binary);
    uint64_t hlen = 0;
    f.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    std::string hs(hlen, '\0');
    f.read(hs.data(), static_cast<std::streamsize>(hlen));
    if (!f) throw ConfigError("truncated observation file '" + path + "'");
    const auto hdr = nlohmann::json::parse(hs, nullptr, false);
    if (hdr.is_discarded() || hdr.value("format", "") != "iscat-observation-v1")
        throw ConfigError("'" + path + "' is not an observation file");

    const int k = hdr.at("K"), t = hdr.at("T"), nr = hdr.at("n_rx");
    Observation obs;
    obs.snr_db = hdr.at("snr_db");
    obs.noise_var = hdr.at("noise_var");
    obs.seed = hdr.at("seed");
    obs.Y.resize(Eigen::Index(k) * t * nr);
    for (Eigen::Index i = 0; i < obs.Y.size(); ++i) {
        double re = 0, im = 0;
        f.read(reinterpret_cast<char*>(&re), sizeof(re));
        f.read(reinterpret_cast<char*>(&im), sizeof(im));
        obs.Y[i] = cplx(re, im);
    }
    if (!f) throw ConfigError("truncated observation payload in '" + path + "'");
    obs.y_k.resize(k);
    for (int kk = 0; kk < k; ++kk) obs.y_k[kk] = obs.Y.segment(Eigen::Index(kk) * t * nr, Eigen::Index(t) * nr);
    if (K) *K = k;
    if (T) *T = t;
    if (n_rx) *n_rx = nr;
    return obs;
}

void write_roi_pgm(const std::string& path, const RoiIndexSet& roi) {
    const int side = roi.grid_side;
    std::vector<unsigned char> mask(size_t(side) * side, 0);
    for (int p : roi.indices) mask[p] = 255;
    auto f = open_out(path, std::ios::binary);
    f << "P5\n" << side << " " << side << "\n255\n";
    f.write(reinterpret_cast<const char*>(mask.data()), static_cast<std::streamsize>(mask.size()));
}

void write_roi_csv(const std::string& path, const RoiIndexSet& roi) {
    CsvTable t;
    t.header = {"pixel", "grid_side"};
    for (int p : roi.indices) t.rows.push_back({double(p), double(roi.grid_side)});
    write_csv(path, t);
}

RoiIndexSet read_roi_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"pixel", "grid_side"})
        throw ConfigError("'" + path + "' is not a ROI CSV");
    if (t.rows.empty()) throw ConfigError("ROI CSV '" + path + "' has no pixels");
    std::vector<int> idx;
    for (const auto& row : t.rows) idx.push_back(static_cast<int>(row[0]));
    return roi_from_indices(std::move(idx), static_cast<int>(t.rows.front()[1]));
}

void write_contrast_csv(const std::string& path, const Eigen::VectorXcd& chi) {
    CsvTable t;
    t.header = {"pixel", "re", "im"};
    for (Eigen::Index p = 0; p < chi.size(); ++p)
        t.rows.push_back({double(p), chi[p].real(), chi[p].imag()});
    write_csv(path, t);
}

Eigen::VectorXcd read_contrast_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"pixel", "re", "im"})
        throw ConfigError("'" + path + "' is not a contrast CSV");
    Eigen::VectorXcd chi(t.rows.size());
    for (const auto& row : t.rows) chi[static_cast<Eigen::Index>(row[0])] = cplx(row[1], row[2]);
    return chi;
}

void write_iteration_log_csv(const std::string& path,
                             const std::vector<std::pair<double, double>>& per_iteration) {
    CsvTable t;
    t.header = {"iteration", "residual", "update_norm"};
    for (size_t n = 0; n < per_iteration.size(); ++n)
        t.rows.push_back({double(n + 1), per_iteration[n].first, per_iteration[n].second});
    write_csv(path, t);
}

uint64_t content_hash(const std::string& text) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    auto f = open_in(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    auto f = open_out(path);
    f << text;
}

} // namespace iscat
