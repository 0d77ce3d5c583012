// SPDX-License-Identifier: Apache-2.0
//
// iscat: forward simulation, sampling-method ROI delineation, ROI-QP /
// Tikhonov-BIM reconstruction and ill-posedness diagnostics for the 2-D
// inverse-scattering toolkit.
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "iscat/diagnostics.hpp"
#include "iscat/errors.hpp"
#include "iscat/experiment.hpp"
#include "iscat/io.hpp"
#include "iscat/scenes.hpp"

namespace {

using namespace iscat;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    double snr_override = std::numeric_limits<double>::quiet_NaN();
};

ExperimentConfig load(const CommonArgs& args) {
    ExperimentConfig cfg =
        args.config_path.empty() ? ExperimentConfig{} : load_config(args.config_path);
    if (!std::isnan(args.snr_override)) cfg.snr_db = {args.snr_override};
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "config file (key = value sections)");
    cmd->add_option("-o,--out-dir", args.out_dir, "output directory");
    cmd->add_option("--snr", args.snr_override, "override SNR [dB]");
}

Scene make_scene(const ExperimentConfig& cfg, const SensingSetup& setup) {
    return build_scene(reference_scene(cfg.scene, setup.grid), setup.freq.omega_c());
}

RoiIndexSet make_roi(const ExperimentConfig& cfg, const SensingSetup& setup, const Scene& scene,
                     const std::string& roi_csv) {
    if (!roi_csv.empty()) return read_roi_csv(roi_csv);
    if (cfg.roi_mode == "full") return roi_full(setup.grid);
    if (cfg.roi_mode == "oracle")
        return roi_from_indices(scene.true_support, setup.grid.side_pixels);
    const LsmResult lsm = lsm_run(scene.chi, setup, cfg.lsm, cfg.snr_db.front(), cfg.noise_seed);
    return roi_select(lsm.scores, lsm.eta, setup.grid.side_pixels);
}

int cmd_simulate(const CommonArgs& args) {
    const ExperimentConfig cfg = load(args);
    const SensingSetup setup = setup_from_config(cfg);
    const Scene scene = make_scene(cfg, setup);
    const Observation obs =
        simulate_observations(scene.chi, setup, cfg.snr_db.front(), cfg.noise_seed);
    std::filesystem::create_directories(cfg.out_dir);
    const std::string path = (std::filesystem::path(cfg.out_dir) / "observation.bin").string();
    save_observation(path, obs, cfg.K, cfg.T, cfg.n_rx);
    write_contrast_csv((std::filesystem::path(cfg.out_dir) / "truth.csv").string(),
                       scene.chi.chi);
    std::cout << "wrote " << path << " (" << obs.Y.size() << " samples, snr " << obs.snr_db
              << " dB, support " << scene.true_support.size() << " px)\n";
    return 0;
}

int cmd_lsm(const CommonArgs& args) {
    const ExperimentConfig cfg = load(args);
    const SensingSetup setup = setup_from_config(cfg);
    const Scene scene = make_scene(cfg, setup);
    const LsmResult lsm =
        lsm_run(scene.chi, setup, cfg.lsm, cfg.snr_db.front(), cfg.noise_seed);
    const RoiIndexSet roi = roi_select(lsm.scores, lsm.eta, setup.grid.side_pixels);
    std::filesystem::create_directories(cfg.out_dir);
    const auto out = [&](const std::string& n) {
        return (std::filesystem::path(cfg.out_dir) / n).string();
    };
    write_roi_csv(out("roi.csv"), roi);
    write_roi_pgm(out("roi.pgm"), roi);
    CsvTable ind;
    ind.header = {"pixel", "indicator", "score"};
    for (int p = 0; p < lsm.indicator.size(); ++p)
        ind.rows.push_back({double(p), lsm.indicator[p], lsm.scores[p]});
    write_csv(out("indicator.csv"), ind);
    const RoiQuality q = roi_quality(roi, scene.true_support);
    std::cout << "ROI: " << roi.P() << " px (eta " << lsm.eta << ", recall " << q.recall
              << ", precision " << q.precision << ")\n";
    return 0;
}

int cmd_reconstruct(const CommonArgs& args, const std::string& obs_path,
                    const std::string& roi_csv, const std::string& method) {
    const ExperimentConfig cfg = load(args);
    const SensingSetup setup = setup_from_config(cfg);
    const Scene scene = make_scene(cfg, setup);
    const Observation obs =
        obs_path.empty()
            ? simulate_observations(scene.chi, setup, cfg.snr_db.front(), cfg.noise_seed)
            : load_observation(obs_path);
    const RoiIndexSet roi = make_roi(cfg, setup, scene, roi_csv);

    ReconstructionResult res;
    if (method == "qp") {
        res = roi_qp_reconstruct(obs, setup, roi, cfg.inversion);
    } else if (method == "bim") {
        BimConfig bim;
        bim.max_born = cfg.inversion.max_born;
        bim.tau_err = cfg.inversion.tau_err;
        res = tikhonov_bim(obs, setup, roi, bim);
    } else {
        throw ConfigError("method must be qp or bim");
    }
    std::filesystem::create_directories(cfg.out_dir);
    const auto out = [&](const std::string& n) {
        return (std::filesystem::path(cfg.out_dir) / n).string();
    };
    write_contrast_csv(out("reconstruction.csv"), res.chi_hat);
    write_iteration_log_csv(out("iterations.csv"), res.per_iteration);
    std::cout << "iterations " << res.iterations_used << ", converged "
              << (res.converged ? "yes" : "no");
    if (!scene.true_support.empty())
        std::cout << ", nmse " << nmse_db(res.chi_hat, scene.chi.chi) << " dB";
    if (!res.diagnostics.empty()) std::cout << " [" << res.diagnostics << "]";
    std::cout << "\n";
    return 0;
}

int cmd_diagnose(const CommonArgs& args, const std::string& roi_csv) {
    const ExperimentConfig cfg = load(args);
    const SensingSetup setup = setup_from_config(cfg);
    const Scene scene = make_scene(cfg, setup);
    const RoiIndexSet roi = make_roi(cfg, setup, scene, roi_csv);

    const OperatorBundle bundle = assemble_bundle(Eigen::VectorXcd::Zero(setup.grid.size()), setup);
    Eigen::MatrixXcd A_sub;
    Eigen::VectorXcd Y_dummy;
    {
        Observation obs;
        obs.Y = Eigen::VectorXcd::Zero(Eigen::Index(cfg.K) * cfg.T * cfg.n_rx);
        std::tie(A_sub, Y_dummy) = restrict_and_stack(bundle, obs, roi);
    }
    const SpectralReport spec = spectral_report(A_sub);
    const CoherenceReport ncc = ncc_report(A_sub);
    std::cout << "P = " << roi.P() << "\nkappa = " << spec.kappa
              << "\nsigma_min = " << spec.sigma_min << "\nsigma_max = " << spec.sigma_max
              << "\nmu_eff = " << ncc.mu_eff << "\ngershgorin_r_max = " << ncc.r_max
              << "\nkappa_bound = " << ncc.kappa_bound
              << " (valid: " << (ncc.bound_valid ? "yes" : "no") << ")\n";
    if (!scene.true_support.empty()) {
        const RoiQuality q = roi_quality(roi, scene.true_support);
        const MismatchBound mb =
            condition_bound_from_mismatch(ncc.mu_eff, q.recall, q.precision, q.k_true);
        std::cout << "recall = " << q.recall << "\nprecision = " << q.precision
                  << "\nxi = " << mb.xi << "\nkappa_max = " << mb.kappa_max << "\n";
    }
    return 0;
}

int cmd_experiment(const CommonArgs& args, const std::string& preset) {
    const ExperimentConfig cfg = load(args);
    const ExperimentOutcome outcome = run_experiment(preset, cfg);
    for (const auto& r : outcome.records)
        std::cout << r.id << ": " << (r.ok ? "ok" : "FAILED (" + r.error + ")") << "\n";
    std::cout << "outputs in " << cfg.out_dir << "\n";
    return outcome.partial() ? 4 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2-D electromagnetic inverse-scattering toolkit"};
    app.require_subcommand(1);

    CommonArgs sim_args, lsm_args, rec_args, diag_args, exp_args;
    std::string obs_path, roi_csv_rec, roi_csv_diag, method = "qp", preset;

    add_common(app.add_subcommand("simulate", "synthesize pilot observations"), sim_args);
    add_common(app.add_subcommand("lsm", "sampling-method ROI delineation"), lsm_args);
    auto* rec = app.add_subcommand("reconstruct", "ROI-QP or Tikhonov-BIM inversion");
    add_common(rec, rec_args);
    rec->add_option("--obs", obs_path, "observation file (default: simulate)");
    rec->add_option("--roi", roi_csv_rec, "ROI CSV (default: roi_mode from config)");
    rec->add_option("--method", method, "qp | bim");
    auto* diag = app.add_subcommand("diagnose", "conditioning and coherence reports");
    add_common(diag, diag_args);
    diag->add_option("--roi", roi_csv_diag, "ROI CSV (default: roi_mode from config)");
    auto* exp = app.add_subcommand("experiment", "run a figure preset");
    add_common(exp, exp_args);
    exp->add_option("preset", preset, "fig2 | fig4 | fig5 | nmse_roi | nmse_snr")->required();

    try {
        app.parse(argc, argv);
        if (app.got_subcommand("simulate")) return cmd_simulate(sim_args);
        if (app.got_subcommand("lsm")) return cmd_lsm(lsm_args);
        if (app.got_subcommand("reconstruct"))
            return cmd_reconstruct(rec_args, obs_path, roi_csv_rec, method);
        if (app.got_subcommand("diagnose")) return cmd_diagnose(diag_args, roi_csv_diag);
        if (app.got_subcommand("experiment")) return cmd_experiment(exp_args, preset);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
