// SPDX-License-Identifier: Apache-2.0
#include "iscat/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "iscat/diagnostics.hpp"
#include "iscat/errors.hpp"
#include "iscat/io.hpp"
#include "iscat/scenes.hpp"

namespace iscat {

namespace {

namespace fs = std::filesystem;

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

/// Born stack (columns for the given ROI only), tone-major rows.
Eigen::MatrixXcd born_stack(const SensingSetup& setup, const RoiIndexSet& roi) {
    const int P = roi.P();
    const Eigen::Index rows_per_tone = Eigen::Index(setup.pilots.T) * setup.array.n_rx;
    Eigen::MatrixXcd stack(rows_per_tone * setup.freq.K, P);
    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(P);
    for (int k = 0; k < setup.freq.K; ++k) {
        const auto& ch = setup.channels[k];
        Eigen::MatrixXcd H1_sub(P, ch.H1.cols()), H2_cols(ch.H2.rows(), P);
        for (int j = 0; j < P; ++j) {
            H1_sub.row(j) = ch.H1.row(roi.indices[j]);
            H2_cols.col(j) = ch.H2.col(roi.indices[j]);
        }
        const Eigen::MatrixXcd G_block = Eigen::MatrixXcd::Zero(P, P); // unused at chi = 0
        stack.middleRows(Eigen::Index(k) * rows_per_tone, rows_per_tone) =
            assemble_operator_columns(zero, G_block, H1_sub * setup.pilots.X[k], H2_cols);
    }
    return stack;
}

RoiIndexSet resolve_roi(const std::string& mode, const Scene& scene, const SensingSetup& setup,
                        const ExperimentConfig& cfg, double snr_db) {
    if (mode == "full") return roi_full(setup.grid);
    if (mode == "oracle") return roi_from_indices(scene.true_support, setup.grid.side_pixels);
    if (mode == "schedule") {
        const auto sch = shrink_schedule(cfg.schedule_l_max, cfg.schedule_l_min, cfg.schedule_steps);
        const auto [r, c] = support_bbox_center(scene.true_support, setup.grid.side_pixels);
        return roi_square(setup.grid, r, c, sch.sides.back());
    }
    if (mode == "lsm") {
        const LsmResult lsm = lsm_run(scene.chi, setup, cfg.lsm, snr_db, cfg.noise_seed);
        return roi_select(lsm.scores, lsm.eta, setup.grid.side_pixels);
    }
    throw ConfigError("unknown roi_mode '" + mode + "'");
}

std::string plot_script(const std::string& csv_name, const std::string& x_col,
                        const std::vector<std::string>& y_cols, const std::string& title,
                        bool logy) {
    std::ostringstream py;
    py << "#!/usr/bin/env python3\nimport csv\nimport matplotlib\nmatplotlib.use('Agg')\n"
          "import matplotlib.pyplot as plt\n\nrows = list(csv.DictReader(open('"
       << csv_name << "')))\nx = [float(r['" << x_col << "']) for r in rows]\n";
    for (const auto& y : y_cols)
        py << "plt.plot(x, [float(r['" << y << "']) for r in rows], marker='o', label='" << y
           << "')\n";
    py << "plt.xlabel('" << x_col << "')\nplt.legend()\nplt.grid(True)\nplt.title('" << title
       << "')\n";
    if (logy) py << "plt.yscale('log')\n";
    py << "plt.savefig('" << csv_name.substr(0, csv_name.size() - 4) << ".png', dpi=150)\n";
    return py.str();
}

struct PresetContext {
    ExperimentOutcome outcome;
    const ExperimentConfig& cfg;

    explicit PresetContext(const std::string& preset, const ExperimentConfig& c) : cfg(c) {
        outcome.preset = preset;
        fs::create_directories(cfg.out_dir);
    }

    void attempt(const std::string& id, const std::function<void()>& body) {
        RunRecord rec;
        rec.id = id;
        try {
            body();
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        outcome.records.push_back(std::move(rec));
    }

    void emit_csv(const std::string& name, const CsvTable& table) {
        const std::string path = join(cfg.out_dir, name);
        write_csv(path, table);
        outcome.outputs.push_back(name);
    }

    void emit_script(const std::string& name, const std::string& text) {
        write_text_file(join(cfg.out_dir, name), text);
        outcome.outputs.push_back(name);
    }

    void emit_manifest() {
        nlohmann::json m;
        m["preset"] = outcome.preset;
        std::ostringstream hash;
        hash << std::hex << content_hash(config_summary(cfg));
        m["config_hash"] = hash.str();
        m["config"] = config_summary(cfg);
        m["noise_seed"] = cfg.noise_seed;
        m["pilot_seed"] = cfg.pilot_seed;
        m["outputs"] = outcome.outputs;
        auto& runs = m["runs"] = nlohmann::json::array();
        for (const auto& r : outcome.records)
            runs.push_back({{"id", r.id}, {"ok", r.ok}, {"error", r.error}});
        write_text_file(join(cfg.out_dir, "manifest.json"), m.dump(2) + "\n");
    }
};

void run_fig2(PresetContext& ctx) {
    CsvTable t;
    t.header = {"K", "empirical_prob", "markov_bound", "mean_sq_zbar"};
    ctx.attempt("phase_mixing", [&] {
        const std::vector<int> Ks{1, 2, 4, 8, 16, 32, 64, 128};
        const auto run = phase_mixing_mc(Ks, 0.25, 20000, ctx.cfg.noise_seed);
        for (size_t i = 0; i < Ks.size(); ++i)
            t.rows.push_back({double(Ks[i]), run.empirical_prob[i], run.markov_bound[i],
                              run.mean_sq_zbar[i]});
    });
    ctx.emit_csv("fig2.csv", t);
    ctx.emit_script("plot_fig2.py", plot_script("fig2.csv", "K",
                                                {"empirical_prob", "markov_bound"},
                                                "Low residual coherence probability", false));
}

void run_fig4(PresetContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    CsvTable t;
    t.header = {"roi_pixels", "kappa", "sigma_min"};
    const SensingSetup setup = setup_from_config(cfg);
    const Scene scene = build_scene(reference_scene(cfg.scene, setup.grid), setup.freq.omega_c());
    const auto sch = shrink_schedule(cfg.schedule_l_max, cfg.schedule_l_min, cfg.schedule_steps);
    const auto [r, c] = support_bbox_center(scene.true_support, setup.grid.side_pixels);
    for (int side : sch.sides) {
        std::ostringstream id;
        id << "spectral_side_" << side;
        ctx.attempt(id.str(), [&] {
            const RoiIndexSet roi = roi_square(setup.grid, r, c, side);
            const SpectralReport rep = spectral_report(born_stack(setup, roi));
            t.rows.push_back({double(roi.P()), rep.kappa, rep.sigma_min});
        });
    }
    ctx.emit_csv("fig4.csv", t);
    ctx.emit_script("plot_fig4.py", plot_script("fig4.csv", "roi_pixels", {"kappa", "sigma_min"},
                                                "Conditioning vs ROI size", true));
}

void run_fig5(PresetContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    CsvTable t;
    t.header = {"roi_pixels", "flops_gram", "flops_cubic"};
    const SensingSetup setup = setup_from_config(cfg);
    const Scene scene = build_scene(reference_scene(cfg.scene, setup.grid), setup.freq.omega_c());
    const Observation obs =
        simulate_observations(scene.chi, setup, cfg.snr_db.front(), cfg.noise_seed);
    InversionConfig inv = cfg.inversion;
    inv.max_born = std::min(inv.max_born, 2); // timing comparison, not accuracy
    // Measured wall clock varies run to run, so it goes to timing.txt and the
    // CSV keeps only the deterministic columns.
    std::ostringstream timing;
    for (const bool full : {true, false}) {
        ctx.attempt(full ? "timing_full" : "timing_roi", [&] {
            const RoiIndexSet roi =
                resolve_roi(full ? "full" : "schedule", scene, setup, cfg, cfg.snr_db.front());
            const double t0 = now_s();
            (void)roi_qp_reconstruct(obs, setup, roi, inv);
            const double wall = now_s() - t0;
            const double P = roi.P();
            const double rows = double(setup.freq.K) * setup.pilots.T * setup.array.n_rx;
            t.rows.push_back({P, 8.0 * rows * P * P, P * P * P});
            timing << (full ? "full" : "roi") << " P=" << P << " wall_clock_s=" << wall << "\n";
        });
    }
    ctx.emit_csv("fig5.csv", t);
    ctx.emit_script("timing.txt", timing.str());
    ctx.emit_script("plot_fig5.py",
                    plot_script("fig5.csv", "roi_pixels", {"flops_gram", "flops_cubic"},
                                "Reconstruction cost vs ROI size", true));
}

void run_nmse_roi(PresetContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    CsvTable t;
    t.header = {"mode_id", "roi_pixels", "recall", "precision", "nmse_qp_db", "nmse_bim_db"};
    const SensingSetup setup = setup_from_config(cfg);
    const Scene scene = build_scene(reference_scene(cfg.scene, setup.grid), setup.freq.omega_c());
    const Observation obs =
        simulate_observations(scene.chi, setup, cfg.snr_db.front(), cfg.noise_seed);
    const std::vector<std::string> modes{"full", "lsm", "oracle"};
    for (size_t m = 0; m < modes.size(); ++m) {
        ctx.attempt("nmse_" + modes[m], [&] {
            const RoiIndexSet roi =
                resolve_roi(modes[m], scene, setup, cfg, cfg.snr_db.front());
            const RoiQuality q = roi_quality(roi, scene.true_support);
            const auto qp = roi_qp_reconstruct(obs, setup, roi, cfg.inversion);
            BimConfig bim;
            bim.max_born = cfg.inversion.max_born;
            bim.tau_err = cfg.inversion.tau_err;
            const auto tk = tikhonov_bim(obs, setup, roi, bim);
            t.rows.push_back({double(m), double(roi.P()), q.recall, q.precision,
                              nmse_db(qp.chi_hat, scene.chi.chi),
                              nmse_db(tk.chi_hat, scene.chi.chi)});
        });
    }
    ctx.emit_csv("nmse_roi.csv", t);
    ctx.emit_script("plot_nmse_roi.py",
                    plot_script("nmse_roi.csv", "roi_pixels", {"nmse_qp_db", "nmse_bim_db"},
                                "NMSE vs ROI choice (mode_id: 0 full, 1 lsm, 2 oracle)", false));
}

void run_nmse_snr(PresetContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    CsvTable t;
    t.header = {"snr_db", "roi_pixels", "nmse_qp_db", "nmse_bim_db"};
    const SensingSetup setup = setup_from_config(cfg);
    const Scene scene = build_scene(reference_scene(cfg.scene, setup.grid), setup.freq.omega_c());
    for (double snr : cfg.snr_db) {
        std::ostringstream id;
        id << "snr_" << snr;
        ctx.attempt(id.str(), [&] {
            const Observation obs = simulate_observations(scene.chi, setup, snr, cfg.noise_seed);
            const RoiIndexSet roi = resolve_roi(cfg.roi_mode, scene, setup, cfg, snr);
            const auto qp = roi_qp_reconstruct(obs, setup, roi, cfg.inversion);
            BimConfig bim;
            bim.max_born = cfg.inversion.max_born;
            bim.tau_err = cfg.inversion.tau_err;
            const auto tk = tikhonov_bim(obs, setup, roi, bim);
            t.rows.push_back({snr, double(roi.P()), nmse_db(qp.chi_hat, scene.chi.chi),
                              nmse_db(tk.chi_hat, scene.chi.chi)});
        });
    }
    ctx.emit_csv("nmse_snr.csv", t);
    ctx.emit_script("plot_nmse_snr.py",
                    plot_script("nmse_snr.csv", "snr_db", {"nmse_qp_db", "nmse_bim_db"},
                                "NMSE vs SNR", false));
}

} // namespace

ExperimentOutcome run_experiment(const std::string& preset, const ExperimentConfig& cfg) {
    PresetContext ctx(preset, cfg);
    if (preset == "fig2") run_fig2(ctx);
    else if (preset == "fig4") run_fig4(ctx);
    else if (preset == "fig5") run_fig5(ctx);
    else if (preset == "nmse_roi") run_nmse_roi(ctx);
    else if (preset == "nmse_snr") run_nmse_snr(ctx);
    else throw ConfigError("unknown preset '" + preset + "' (expected fig2, fig4, fig5, "
                           "nmse_roi or nmse_snr)");
    ctx.emit_manifest();
    return ctx.outcome;
}

} // namespace iscat
