#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gsl/gsl_sf_bessel.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "iscat/constants.hpp"
#include "iscat/contrast.hpp"
#include "iscat/errors.hpp"
#include "iscat/frequency.hpp"
#include "iscat/geometry.hpp"
#include "iscat/greens.hpp"
#include "iscat/grid.hpp"

using namespace iscat;

TEST_CASE("frequency grid endpoints at the reference configuration") {
    const auto fg = build_frequency_grid(28e9, 100e6, 32);
    REQUIRE(fg.tones.size() == 32);
    CHECK(fg.tones.front() == doctest::Approx(26.45e9).epsilon(1e-12));
    CHECK(fg.tones.back() == doctest::Approx(29.55e9).epsilon(1e-12));
    for (size_t k = 1; k < fg.tones.size(); ++k) {
        CHECK(fg.tones[k] - fg.tones[k - 1] == doctest::Approx(100e6).epsilon(1e-9));
    }
}

TEST_CASE("single-tone grid collapses to the center frequency") {
    const auto fg = build_frequency_grid(28e9, 100e6, 1);
    REQUIRE(fg.tones.size() == 1);
    CHECK(fg.tones[0] == doctest::Approx(28e9));
}

TEST_CASE("nonpositive tones are rejected") {
    CHECK_THROWS_AS(build_frequency_grid(1e9, 1e9, 3), ConfigError);
    CHECK_THROWS_AS(build_frequency_grid(1e9, 0.0, 2), ConfigError);
    CHECK_THROWS_AS(build_frequency_grid(1e9, 1e6, 0), ConfigError);
}

TEST_CASE("Hankel functions of the second kind match the GSL oracle") {
    // Log-spaced arguments covering near-field through deep far-field.
    for (double x = 0.1; x <= 1e4; x *= 1.37) {
        const cplx h0 = hankel2_0(x);
        const cplx h1 = hankel2_1(x);
        const double scale0 = std::max(1.0, std::abs(h0));
        CHECK(std::abs(h0.real() - gsl_sf_bessel_J0(x)) / scale0 < 1e-10);
        CHECK(std::abs(h0.imag() + gsl_sf_bessel_Y0(x)) / scale0 < 1e-10);
        const double scale1 = std::max(1.0, std::abs(h1));
        CHECK(std::abs(h1.real() - gsl_sf_bessel_J1(x)) / scale1 < 1e-10);
        CHECK(std::abs(h1.imag() + gsl_sf_bessel_Y1(x)) / scale1 < 1e-10);
    }
}

TEST_CASE("far-field kernel magnitude matches the large-argument asymptotic") {
    const double k_b = 2.0 * constants::pi / 0.01; // 1 cm wavelength
    for (double r : {1.0, 3.0, 10.0}) {
        const double asym = 0.25 * k_b * k_b * std::sqrt(2.0 / (constants::pi * k_b * r));
        CHECK(std::abs(greens_kernel(k_b, r)) == doctest::Approx(asym).epsilon(0.01));
    }
}

TEST_CASE("self term agrees with brute-force quadrature over the equivalent disk") {
    const double k_b = 2.0 * constants::pi / 0.3;
    const double cell = 0.05;
    const double a = cell / std::sqrt(constants::pi); // equal-area disk radius
    // Radial quadrature of (-j/4) k^2 H0^(2)(k r) * 2 pi r dr over [0, a],
    // midpoint rule with many panels; integrable log singularity at r = 0.
    const int n = 200000;
    cplx integral = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * a / n;
        integral += greens_kernel(k_b, r) * (2.0 * constants::pi * r) * (a / n);
    }
    const cplx self = greens_self_term(k_b, cell);
    CHECK(std::abs(self - integral) / std::abs(integral) < 1e-3);
}

TEST_CASE("in-domain Green matrix is complex symmetric with the self term on the diagonal") {
    const auto grid = make_grid(6, 0.3);
    const double k_b = 2.0 * constants::pi / 0.15;
    const auto G = greens_domain(grid, k_b);
    REQUIRE(G.rows() == 36);
    REQUIRE(G.cols() == 36);
    const cplx self = greens_self_term(k_b, grid.cell_side());
    for (int i = 0; i < 36; ++i) {
        CHECK(std::abs(G(i, i) - self) < 1e-14 * std::abs(self));
        for (int j = i + 1; j < 36; ++j) {
            CHECK(std::abs(G(i, j) - G(j, i)) < 1e-14 * std::abs(G(i, j)));
        }
    }
}

TEST_CASE("restricted Green blocks and columns match the full matrix") {
    const auto grid = make_grid(8, 0.4);
    const double k_b = 2.0 * constants::pi / 0.2;
    const auto G = greens_domain(grid, k_b);
    const std::vector<int> idx{3, 17, 22, 40, 63};
    const auto B = greens_domain_block(grid, k_b, idx);
    const auto C = greens_domain_cols(grid, k_b, idx);
    for (size_t a = 0; a < idx.size(); ++a) {
        for (size_t b = 0; b < idx.size(); ++b) {
            CHECK(std::abs(B(a, b) - G(idx[a], idx[b])) == doctest::Approx(0.0));
        }
        for (int i = 0; i < G.rows(); ++i) {
            CHECK(std::abs(C(i, a) - G(i, idx[a])) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("observation Green matrix obeys reciprocity") {
    const auto uca = make_uca(2.0, 7, 7);
    std::vector<Eigen::Vector2d> pts{{0.1, 0.0}, {-0.3, 0.2}, {0.0, -0.25}};
    const double k_b = 2.0 * constants::pi / 0.5;
    const auto AB = greens_obs(pts, uca.tx_positions, k_b);
    const auto BA = greens_obs(uca.tx_positions, pts, k_b);
    CHECK((AB - BA.transpose()).norm() < 1e-14 * AB.norm());
}

TEST_CASE("kernel magnitude decays monotonically in the far field") {
    const double k_b = 2.0 * constants::pi / 0.1;
    double prev = std::abs(greens_kernel(k_b, 0.5));
    for (double r = 0.6; r < 20.0; r += 0.1) {
        const double cur = std::abs(greens_kernel(k_b, r));
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("grid lattice is centered with the advertised cell area") {
    const auto grid = make_grid(36, 1.8);
    REQUIRE(grid.size() == 1296);
    CHECK(grid.cell_side() == doctest::Approx(0.05));
    CHECK(grid.cell_area == doctest::Approx(0.0025));
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    for (const auto& p : grid.centers) sum += p;
    CHECK(sum.norm() < 1e-12);
    // Corner pixel center sits half a cell inside the extent.
    CHECK(grid.centers[0].x() == doctest::Approx(-0.875));
    CHECK(grid.centers[0].y() == doctest::Approx(-0.875));
}

TEST_CASE("UCA elements are equally spaced on the requested radius") {
    const auto uca = make_uca(10.0, 60, 60);
    REQUIRE(uca.tx_positions.size() == 60);
    REQUIRE(uca.rx_positions.size() == 60);
    for (const auto& p : uca.tx_positions) CHECK(p.norm() == doctest::Approx(10.0));
    const double step = 2.0 * constants::pi / 60.0;
    for (int i = 1; i < 60; ++i) {
        const double a0 = std::atan2(uca.tx_positions[i - 1].y(), uca.tx_positions[i - 1].x());
        const double a1 = std::atan2(uca.tx_positions[i].y(), uca.tx_positions[i].x());
        double d = a1 - a0;
        while (d < 0) d += 2.0 * constants::pi;
        CHECK(d == doctest::Approx(step).epsilon(1e-9));
    }
}

TEST_CASE("contrast map follows the constitutive rule") {
    const auto grid = make_grid(4, 0.2);
    Eigen::VectorXd eps = Eigen::VectorXd::Ones(16), sig = Eigen::VectorXd::Zero(16);
    const double omega = 2.0 * constants::pi * 28e9;

    SUBCASE("vacuum gives zero contrast") {
        const auto cm = contrast_from_scene(grid, eps, sig, omega);
        CHECK(cm.chi.norm() == 0.0);
    }
    SUBCASE("lossless permittivity 1.5 gives chi = 0.5") {
        eps[5] = 1.5;
        const auto cm = contrast_from_scene(grid, eps, sig, omega);
        CHECK(cm.chi[5] == cplx(0.5, 0.0));
        CHECK(std::abs(cm.chi[4]) == 0.0);
    }
    SUBCASE("conductive pixel gains the expected imaginary part") {
        eps[3] = 2.0;
        sig[3] = 0.01;
        const auto cm = contrast_from_scene(grid, eps, sig, omega);
        CHECK(cm.chi[3].real() == doctest::Approx(1.0));
        CHECK(cm.chi[3].imag() == doctest::Approx(0.01 / (constants::eps0 * omega)).epsilon(1e-12));
        const auto support = contrast_support(cm.chi);
        REQUIRE(support.size() == 1);
        CHECK(support[0] == 3);
    }
    SUBCASE("passive-media preconditions are enforced") {
        eps[0] = 0.5;
        CHECK_THROWS_AS(contrast_from_scene(grid, eps, sig, omega), ConfigError);
        eps[0] = 1.0;
        sig[0] = -1.0;
        CHECK_THROWS_AS(contrast_from_scene(grid, eps, sig, omega), ConfigError);
    }
}
