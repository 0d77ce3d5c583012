#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>
#include <queue>
#include <string>
#include <vector>

#include "iscat/config.hpp"
#include "iscat/errors.hpp"
#include "iscat/forward.hpp"
#include "iscat/experiment.hpp"
#include "iscat/io.hpp"
#include "iscat/scenes.hpp"

using namespace iscat;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("iscat_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

double raster_area(const Scene& scene) {
    const double cell = scene.spec.grid.cell_side();
    return double(scene.true_support.size()) * cell * cell;
}

int connected_components(const std::vector<int>& support, int side) {
    std::vector<int> label(side * side, 0);
    for (int p : support) label[p] = -1;
    int n = 0;
    for (int p : support) {
        if (label[p] != -1) continue;
        ++n;
        std::queue<int> q;
        q.push(p);
        label[p] = n;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            const int r = u / side, c = u % side;
            const int nb[4] = {u - side, u + side, u - 1, u + 1};
            const bool ok[4] = {r > 0, r < side - 1, c > 0, c < side - 1};
            for (int k = 0; k < 4; ++k)
                if (ok[k] && label[nb[k]] == -1) {
                    label[nb[k]] = n;
                    q.push(nb[k]);
                }
        }
    }
    return n;
}

Scene make_reference(const std::string& name, double omega = 2.0 * constants::pi * 1e9) {
    const auto grid = make_grid(36, 1.8);
    return build_scene(reference_scene(name, grid), omega);
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.scene = "circle";
    cfg.grid_pixels = 10;
    cfg.n_tx = 8;
    cfg.n_rx = 8;
    cfg.T = 2;
    cfg.K = 3;
    cfg.f_c = 2e8;
    cfg.delta_f = 2e6;
    return cfg;
}

} // namespace

TEST_CASE("rasterized areas match the analytic shape areas within 5%") {
    SUBCASE("circle") {
        const auto s = make_reference("circle");
        const double analytic = constants::pi * 0.5 * 0.5;
        CHECK(raster_area(s) == doctest::Approx(analytic).epsilon(0.05));
    }
    SUBCASE("triangle") {
        const auto s = make_reference("triangle");
        CHECK(raster_area(s) == doctest::Approx(0.65).epsilon(0.05));
    }
    SUBCASE("tshape at a resolution matching its 0.24 m limb width") {
        // At 36 px the 4.8-cell-wide limbs quantize to 4 cells (-17% area);
        // at 144 px the rasterizer is within the tolerance.
        const auto grid = make_grid(144, 1.8);
        const auto s = build_scene(reference_scene("tshape", grid), 2.0 * constants::pi * 1e9);
        // bar (arm x width) plus stem (width x arm), disjoint by construction
        CHECK(raster_area(s) == doctest::Approx(2.0 * 1.1 * 0.24).epsilon(0.05));
    }
}

TEST_CASE("reference scene supports sit fully inside the grid") {
    for (const char* name : {"circle", "triangle", "tshape", "ellipse_pair_030"}) {
        const auto s = make_reference(name);
        REQUIRE(!s.true_support.empty());
        for (int p : s.true_support) {
            CHECK(p >= 0);
            CHECK(p < 36 * 36);
        }
    }
}

TEST_CASE("ellipse pairs rasterize to exactly two connected components") {
    for (const char* name : {"ellipse_pair_030", "ellipse_pair_010"}) {
        const auto s = make_reference(name);
        CHECK(connected_components(s.true_support, 36) == 2);
    }
}

TEST_CASE("empty scene has no support and zero contrast") {
    const auto s = make_reference("empty");
    CHECK(s.true_support.empty());
    CHECK(s.chi.chi.norm() == 0.0);
}

TEST_CASE("unknown scene name is rejected") {
    const auto grid = make_grid(36, 1.8);
    CHECK_THROWS_AS((void)reference_scene("hexagon", grid), ConfigError);
}

TEST_CASE("shape leaving the grid extent is rejected") {
    SceneSpec spec;
    spec.grid = make_grid(36, 1.8);
    spec.shapes.push_back(make_circle({0.5, 0.0}, 0.5, 1.5)); // hi.x = 1.0 > 0.9
    spec.name = "offgrid";
    CHECK_THROWS_WITH_AS(build_scene(spec, 2.0 * constants::pi * 1e9),
                         doctest::Contains("extent"), ConfigError);
}

TEST_CASE("shrink schedule") {
    SUBCASE("hand-checkable linear ramp") {
        const auto sch = shrink_schedule(36, 20, 5);
        CHECK(sch.sides == std::vector<int>{36, 32, 28, 24, 20});
        CHECK(sch.pixel_counts == std::vector<int>{1296, 1024, 784, 576, 400});
    }
    SUBCASE("endpoints are always exact") {
        const auto sch = shrink_schedule(36, 21, 6);
        CHECK(sch.sides.front() == 36);
        CHECK(sch.sides.back() == 21);
        CHECK(int(sch.sides.size()) == 6);
        for (size_t i = 1; i < sch.sides.size(); ++i) CHECK(sch.sides[i] < sch.sides[i - 1]);
    }
    SUBCASE("invalid parameters throw") {
        CHECK_THROWS_AS((void)shrink_schedule(36, 20, 1), ConfigError);
        CHECK_THROWS_AS((void)shrink_schedule(20, 36, 5), ConfigError);
        CHECK_THROWS_AS((void)shrink_schedule(36, 0, 5), ConfigError);
    }
}

TEST_CASE("support bbox center of a centered circle is central and symmetric") {
    const auto s = make_reference("circle");
    const auto [r, c] = support_bbox_center(s.true_support, 36);
    CHECK(r == c);
    CHECK(r >= 16);
    CHECK(r <= 18);
}

TEST_CASE("NMSE definition") {
    Eigen::VectorXcd t(3);
    t << cplx(1, 0), cplx(0, 2), cplx(-1, 1);
    SUBCASE("exact estimate hits the floor") { CHECK(nmse_db(t, t) == -300.0); }
    SUBCASE("zero estimate gives 0 dB") {
        CHECK(nmse_db(Eigen::VectorXcd::Zero(3), t) == doctest::Approx(0.0));
    }
    SUBCASE("doubling gives 0 dB") { CHECK(nmse_db(2.0 * t, t) == doctest::Approx(0.0)); }
    SUBCASE("zero truth is undefined") {
        CHECK_THROWS_AS((void)nmse_db(t, Eigen::VectorXcd::Zero(3)), ConfigError);
    }
}

TEST_CASE("CSV round trip preserves values and header") {
    TempDir dir("csv");
    CsvTable table;
    table.header = {"a", "b", "c"};
    table.rows = {{1.0, -2.5, 3e-17}, {4.0, 5.0, 6.0}};
    write_csv(dir.file("t.csv"), table);
    const auto back = read_csv(dir.file("t.csv"));
    CHECK(back.header == table.header);
    REQUIRE(back.rows.size() == 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) CHECK(back.rows[i][j] == table.rows[i][j]);
}

TEST_CASE("observation save/load round trip is exact") {
    TempDir dir("obs");
    const auto cfg = small_config();
    const auto setup = setup_from_config(cfg);
    const auto scene = build_scene(reference_scene(cfg.scene, setup.grid), setup.freq.omega_c());
    const auto obs = simulate_observations(scene.chi, setup, 10.0, 42);
    save_observation(dir.file("obs.bin"), obs, cfg.K, cfg.T, cfg.n_rx);
    int K = 0, T = 0, n_rx = 0;
    const auto back = load_observation(dir.file("obs.bin"), &K, &T, &n_rx);
    CHECK(K == cfg.K);
    CHECK(T == cfg.T);
    CHECK(n_rx == cfg.n_rx);
    REQUIRE(back.y_k.size() == obs.y_k.size());
    for (size_t k = 0; k < obs.y_k.size(); ++k)
        CHECK((back.y_k[k] - obs.y_k[k]).norm() == 0.0);
    CHECK(back.snr_db == obs.snr_db);
    CHECK(back.seed == obs.seed);
    CHECK(back.noise_var == obs.noise_var);
    CHECK((back.Y - obs.Y).norm() == 0.0);
}

TEST_CASE("ROI and contrast CSV round trips") {
    TempDir dir("roi");
    const auto roi = roi_from_indices({3, 17, 44, 90}, 10);
    write_roi_csv(dir.file("roi.csv"), roi);
    const auto back = read_roi_csv(dir.file("roi.csv"));
    CHECK(back.indices == roi.indices);
    CHECK(back.grid_side == roi.grid_side);

    Eigen::VectorXcd chi(4);
    chi << cplx(0.5, 0), cplx(0, -0.25), cplx(1e-18, 3), cplx(-2, -2);
    write_contrast_csv(dir.file("chi.csv"), chi);
    const auto chi_back = read_contrast_csv(dir.file("chi.csv"));
    REQUIRE(chi_back.size() == 4);
    CHECK((chi_back - chi).norm() == 0.0);
}

TEST_CASE("config parsing") {
    SUBCASE("valid text sets every touched field") {
        const std::string text = "[scene]\nname = tshape\ngrid_pixels = 24\n"
                                 "[frequencies]\nf_c_hz = 1e9\ntones = 4\n"
                                 "[experiment]\nsnr_db = 0, 10, 30\nroi_mode = oracle\n";
        const auto cfg = parse_config(text);
        CHECK(cfg.scene == "tshape");
        CHECK(cfg.grid_pixels == 24);
        CHECK(cfg.f_c == 1e9);
        CHECK(cfg.K == 4);
        CHECK(cfg.snr_db == std::vector<double>{0.0, 10.0, 30.0});
        CHECK(cfg.roi_mode == "oracle");
        CHECK(cfg.delta_f == 100e6); // untouched default
    }
    SUBCASE("comments and blank lines are ignored") {
        const auto cfg = parse_config("# top\n\n[scene]\nname = circle ; trailing\n");
        CHECK(cfg.scene == "circle");
    }
    SUBCASE("unknown key names the line") {
        CHECK_THROWS_WITH_AS(parse_config("[scene]\nnam = circle\n"), doctest::Contains("line 2"),
                             ConfigError);
    }
    SUBCASE("unknown section is rejected") {
        CHECK_THROWS_WITH_AS(parse_config("[scnee]\n"), doctest::Contains("scnee"), ConfigError);
    }
    SUBCASE("missing equals names the line") {
        CHECK_THROWS_WITH_AS(parse_config("[scene]\n\nname circle\n"), doctest::Contains("line 3"),
                             ConfigError);
    }
    SUBCASE("bad numeric value is rejected") {
        CHECK_THROWS_AS(parse_config("[frequencies]\ntones = four\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("[scene]\ngrid_pixels = 2.5\n"), ConfigError);
    }
    SUBCASE("invalid roi_mode is rejected") {
        CHECK_THROWS_AS(parse_config("[experiment]\nroi_mode = random\n"), ConfigError);
    }
}

TEST_CASE("config summary round-trips through the parser") {
    ExperimentConfig cfg = small_config();
    cfg.snr_db = {0.0, 12.5, 30.0};
    cfg.lsm.zeta = 3.25e-3;
    cfg.inversion.alpha = 7e-2;
    cfg.noise_seed = 123456789012345ULL;
    const std::string text = config_summary(cfg);
    const auto back = parse_config(text);
    CHECK(config_summary(back) == text);
    CHECK(back.scene == cfg.scene);
    CHECK(back.snr_db == cfg.snr_db);
    CHECK(back.noise_seed == cfg.noise_seed);
    CHECK(back.inversion.alpha == cfg.inversion.alpha);
}

TEST_CASE("phase-mixing preset runs and reruns byte-identically") {
    TempDir dir_a("fig2a"), dir_b("fig2b");
    ExperimentConfig cfg = small_config();
    cfg.out_dir = dir_a.path.string();
    const auto out_a = run_experiment("fig2", cfg);
    CHECK(!out_a.partial());
    REQUIRE(!out_a.outputs.empty());
    cfg.out_dir = dir_b.path.string();
    const auto out_b = run_experiment("fig2", cfg);
    bool compared_csv = false;
    for (size_t i = 0; i < out_a.outputs.size(); ++i) {
        const std::string& name = out_a.outputs[i];
        if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
        CHECK(read_text_file((dir_a.path / name).string()) ==
              read_text_file((dir_b.path / name).string()));
        compared_csv = true;
    }
    CHECK(compared_csv);
}

TEST_CASE("unknown preset is rejected") {
    ExperimentConfig cfg = small_config();
    CHECK_THROWS_AS((void)run_experiment("fig99", cfg), ConfigError);
}

TEST_CASE("content hash separates different texts and is stable") {
    const std::string a = "alpha = 1\n", b = "alpha = 2\n";
    CHECK(content_hash(a) == content_hash(a));
    CHECK(content_hash(a) != content_hash(b));
}
