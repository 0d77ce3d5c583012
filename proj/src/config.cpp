// SPDX-License-Identifier: Apache-2.0
#include "iscat/config.hpp"

#include <sstream>

#include "iscat/errors.hpp"
#include "iscat/io.hpp"

namespace iscat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    const int i = static_cast<int>(x);
    if (double(i) != x) throw ConfigError("'" + key + "' must be an integer, got '" + v + "'");
    return i;
}

uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad seed value for '" + key + "': '" + v + "'");
    }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(to_double(key, trim(cell)));
    if (out.empty()) throw ConfigError("'" + key + "' list is empty");
    return out;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        std::string line = raw;
        for (const char c : {'#', ';'}) {
            const auto pos = line.find(c);
            if (pos != std::string::npos) line.erase(pos);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section at line " +
                                                      std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "scene" && section != "array" && section != "frequencies" &&
                section != "pilots" && section != "lsm" && section != "inversion" &&
                section != "experiment")
                throw ConfigError("unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (qual == "scene.name") cfg.scene = val;
        else if (qual == "scene.grid_pixels") cfg.grid_pixels = to_int(qual, val);
        else if (qual == "scene.extent_m") cfg.extent_m = to_double(qual, val);
        else if (qual == "array.radius_m") cfg.radius_m = to_double(qual, val);
        else if (qual == "array.n_tx") cfg.n_tx = to_int(qual, val);
        else if (qual == "array.n_rx") cfg.n_rx = to_int(qual, val);
        else if (qual == "frequencies.f_c_hz") cfg.f_c = to_double(qual, val);
        else if (qual == "frequencies.delta_f_hz") cfg.delta_f = to_double(qual, val);
        else if (qual == "frequencies.tones") cfg.K = to_int(qual, val);
        else if (qual == "pilots.slots") cfg.T = to_int(qual, val);
        else if (qual == "pilots.seed") cfg.pilot_seed = to_u64(qual, val);
        else if (qual == "lsm.zeta") cfg.lsm.zeta = to_double(qual, val);
        else if (qual == "lsm.epsilon") cfg.lsm.epsilon = to_double(qual, val);
        else if (qual == "lsm.q_trim") cfg.lsm.q_trim = to_double(qual, val);
        else if (qual == "inversion.alpha") cfg.inversion.alpha = to_double(qual, val);
        else if (qual == "inversion.beta") cfg.inversion.beta = to_double(qual, val);
        else if (qual == "inversion.lower") cfg.inversion.lower = to_double(qual, val);
        else if (qual == "inversion.upper") cfg.inversion.upper = to_double(qual, val);
        else if (qual == "inversion.tau_err") cfg.inversion.tau_err = to_double(qual, val);
        else if (qual == "inversion.max_born") cfg.inversion.max_born = to_int(qual, val);
        else if (qual == "inversion.qp_tol") cfg.inversion.qp_tol = to_double(qual, val);
        else if (qual == "inversion.qp_max_iters") cfg.inversion.qp_max_iters = to_int(qual, val);
        else if (qual == "experiment.snr_db") cfg.snr_db = to_list(qual, val);
        else if (qual == "experiment.roi_mode") cfg.roi_mode = val;
        else if (qual == "experiment.noise_seed") cfg.noise_seed = to_u64(qual, val);
        else if (qual == "experiment.trials") cfg.trials = to_int(qual, val);
        else if (qual == "experiment.out_dir") cfg.out_dir = val;
        else if (qual == "experiment.schedule_l_max") cfg.schedule_l_max = to_int(qual, val);
        else if (qual == "experiment.schedule_l_min") cfg.schedule_l_min = to_int(qual, val);
        else if (qual == "experiment.schedule_steps") cfg.schedule_steps = to_int(qual, val);
        else throw ConfigError("unknown key '" + qual + "' at line " + std::to_string(lineno));
    }
    if (cfg.roi_mode != "lsm" && cfg.roi_mode != "schedule" && cfg.roi_mode != "full" &&
        cfg.roi_mode != "oracle")
        throw ConfigError("roi_mode must be lsm, schedule, full or oracle");
    if (cfg.inversion.max_born < 1) throw ConfigError("max_born must be at least 1");
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

std::string config_summary(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "[scene]\nname = " << cfg.scene << "\ngrid_pixels = " << cfg.grid_pixels
       << "\nextent_m = " << cfg.extent_m << "\n[array]\nradius_m = " << cfg.radius_m
       << "\nn_tx = " << cfg.n_tx << "\nn_rx = " << cfg.n_rx << "\n[frequencies]\nf_c_hz = "
       << cfg.f_c << "\ndelta_f_hz = " << cfg.delta_f << "\ntones = " << cfg.K
       << "\n[pilots]\nslots = " << cfg.T << "\nseed = " << cfg.pilot_seed
       << "\n[lsm]\nzeta = " << cfg.lsm.zeta << "\nepsilon = " << cfg.lsm.epsilon
       << "\nq_trim = " << cfg.lsm.q_trim << "\n[inversion]\nalpha = " << cfg.inversion.alpha
       << "\nbeta = " << cfg.inversion.beta << "\nlower = " << cfg.inversion.lower
       << "\nupper = " << cfg.inversion.upper << "\ntau_err = " << cfg.inversion.tau_err
       << "\nmax_born = " << cfg.inversion.max_born << "\nqp_tol = " << cfg.inversion.qp_tol
       << "\nqp_max_iters = " << cfg.inversion.qp_max_iters << "\n[experiment]\nsnr_db =";
    for (size_t i = 0; i < cfg.snr_db.size(); ++i) os << (i ? "," : " ") << cfg.snr_db[i];
    os << "\nroi_mode = " << cfg.roi_mode << "\nnoise_seed = " << cfg.noise_seed
       << "\ntrials = " << cfg.trials << "\nschedule_l_max = " << cfg.schedule_l_max
       << "\nschedule_l_min = " << cfg.schedule_l_min
       << "\nschedule_steps = " << cfg.schedule_steps << "\n";
    return os.str();
}

FrequencyGrid frequency_grid_from_config(const ExperimentConfig& cfg) {
    return build_frequency_grid(cfg.f_c, cfg.delta_f, cfg.K);
}

SensingSetup setup_from_config(const ExperimentConfig& cfg) {
    const FrequencyGrid freq = frequency_grid_from_config(cfg);
    const Grid2D grid = make_grid(cfg.grid_pixels, cfg.extent_m);
    const ArrayGeometry array = make_uca(cfg.radius_m, cfg.n_tx, cfg.n_rx);
    const PilotBook pilots = make_pilots(cfg.n_tx, cfg.T, cfg.K, cfg.pilot_seed);
    return make_setup(freq, grid, array, pilots);
}

} // namespace iscat
