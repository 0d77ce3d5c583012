#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "iscat/config.hpp"
#include "iscat/errors.hpp"
#include "iscat/lsm.hpp"
#include "iscat/scenes.hpp"

using namespace iscat;

namespace {

SensingSetup small_setup(double f_c = 2e8, int side = 12) {
    const auto freq = build_frequency_grid(f_c, f_c / 100.0, 4);
    const auto grid = make_grid(side, 1.8);
    const auto uca = make_uca(10.0, 16, 16);
    const auto pilots = make_pilots(16, 3, 4, 1);
    return make_setup(freq, grid, uca, pilots);
}

ContrastMap point_scatterer(const Grid2D& grid, int pixel, double omega) {
    Eigen::VectorXd eps = Eigen::VectorXd::Ones(grid.size());
    Eigen::VectorXd sig = Eigen::VectorXd::Zero(grid.size());
    eps[pixel] = 2.0;
    return contrast_from_scene(grid, eps, sig, omega);
}

} // namespace

TEST_CASE("threshold hand trace on five scores") {
    // Scores 0.05 0.10 0.12 0.70 0.80 with one-sample trimming: interior gaps
    // are 0.05, 0.02, 0.58, so the split falls at (0.12 + 0.70)/2 = 0.41.
    const Eigen::VectorXd s = (Eigen::VectorXd(5) << 0.05, 0.10, 0.12, 0.70, 0.80).finished();
    const double eta = max_gap_eta(s, 0.05);
    CHECK(eta == doctest::Approx(0.41).epsilon(1e-12));

    const auto roi = roi_select(s, eta, 5);
    REQUIRE(roi.P() == 3);
    CHECK(roi.indices == std::vector<int>{0, 1, 2});
}

TEST_CASE("normalized scores span zero to almost one and rank inversely to the indicator") {
    Eigen::VectorXd J(6);
    J << -5.0, -4.0, -6.5, -1.0, -2.0, -3.0;
    Eigen::VectorXd scores;
    trimmed_max_gap_threshold(J, 1e-9, 0.05, &scores);
    CHECK(scores.minCoeff() == 0.0);                      // at the indicator max
    CHECK(scores.maxCoeff() == doctest::Approx(1.0));     // at the indicator min
    CHECK(scores[3] == 0.0);
    CHECK(scores[2] == scores.maxCoeff());
}

TEST_CASE("threshold ignores positive affine rescaling of the indicator") {
    Eigen::VectorXd J(8);
    J << -3.0, -2.9, -2.8, -2.75, -1.0, -0.9, -0.85, -0.8;
    Eigen::VectorXd s1, s2;
    const double e1 = trimmed_max_gap_threshold(J, 1e-9, 0.05, &s1);
    const double e2 = trimmed_max_gap_threshold((J.array() * 7.5 + 42.0).matrix(), 1e-9, 0.05, &s2);
    CHECK(std::abs(e1 - e2) < 1e-9);
    CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("all-equal indicator degenerates to a full-domain ROI") {
    Eigen::VectorXd J = Eigen::VectorXd::Constant(9, -4.2);
    Eigen::VectorXd scores;
    const double eta = trimmed_max_gap_threshold(J, 1e-4, 0.05, &scores);
    CHECK(eta == 0.0);
    CHECK(scores.cwiseAbs().maxCoeff() == 0.0);
    const auto roi = roi_select(scores, eta, 3);
    CHECK(roi.P() == 9);
}

TEST_CASE("trim window must be nonempty") {
    Eigen::VectorXd J(3);
    J << 0.0, 1.0, 2.0;
    CHECK_THROWS_AS(trimmed_max_gap_threshold(J, 1e-4, 0.5), ConfigError);
}

TEST_CASE("eta at or above the max score selects every pixel") {
    Eigen::VectorXd scores(4);
    scores << 0.0, 0.3, 0.7, 1.0;
    const auto roi = roi_select(scores, 1.0, 2);
    CHECK(roi.P() == 4);
}

TEST_CASE("sampling solve satisfies its normal equations and shrinks under heavy damping") {
    const auto setup = small_setup();
    const auto chi = point_scatterer(setup.grid, 5 * 12 + 7, setup.freq.omega_c());
    const auto U = multistatic_response(chi, setup, 0, std::numeric_limits<double>::infinity(), 0);
    const auto G2 = stack_slots(setup.channels[0].G2_gamma, setup.pilots.T);

    const double zeta = 1e-3;
    const auto c = lsm_solve(U, G2, zeta);
    const Eigen::MatrixXcd lhs = (U.adjoint() * U + zeta * Eigen::MatrixXcd::Identity(U.cols(), U.cols())) * c;
    const Eigen::MatrixXcd rhs = U.adjoint() * G2;
    CHECK((lhs - rhs).norm() < 1e-10 * rhs.norm());

    const auto c_heavy = lsm_solve(U, G2, 1e12);
    CHECK(c_heavy.norm() < 1e-6 * c.norm());
}

TEST_CASE("indicator arithmetic") {
    Eigen::MatrixXcd c1 = Eigen::MatrixXcd::Random(4, 6);
    SUBCASE("K = 1 reduces to the single-tone log indicator") {
        const auto J = indicator({c1});
        for (int p = 0; p < 6; ++p) {
            CHECK(J[p] == doctest::Approx(std::log10(c1.col(p).squaredNorm())));
        }
    }
    SUBCASE("scaling every tone by 10 shifts the indicator by exactly 2") {
        Eigen::MatrixXcd c2 = Eigen::MatrixXcd::Random(4, 6);
        const auto J = indicator({c1, c2});
        const auto J10 = indicator({Eigen::MatrixXcd(10.0 * c1), Eigen::MatrixXcd(10.0 * c2)});
        CHECK((J10 - J - Eigen::VectorXd::Constant(6, 2.0)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("point scatterer pipeline localizes the scatterer") {
    const auto setup = small_setup();
    const int pixel = 5 * 12 + 7;
    const auto chi = point_scatterer(setup.grid, pixel, setup.freq.omega_c());
    LsmConfig cfg;
    const auto res = lsm_run(chi, setup, cfg, 30.0, 3);
    REQUIRE(!res.degenerate);
    const auto roi = roi_select(res.scores, res.eta, setup.grid.side_pixels);
    // The retained region must contain the scatterer pixel and stay small.
    CHECK(std::find(roi.indices.begin(), roi.indices.end(), pixel) != roi.indices.end());
    CHECK(roi.P() < setup.grid.size() / 2);
    // The indicator at the scatterer dominates the far corner.
    CHECK(res.indicator[pixel] > res.indicator[0]);
}

TEST_CASE("lsm runs are deterministic per seed") {
    const auto setup = small_setup();
    const auto chi = point_scatterer(setup.grid, 30, setup.freq.omega_c());
    LsmConfig cfg;
    const auto a = lsm_run(chi, setup, cfg, 5.0, 11);
    const auto b = lsm_run(chi, setup, cfg, 5.0, 11);
    CHECK((a.indicator - b.indicator).norm() == 0.0);
    CHECK(a.eta == b.eta);
}
