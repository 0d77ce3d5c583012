// SPDX-License-Identifier: Apache-2.0
#include "iscat/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iscat/errors.hpp"

namespace iscat {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
}

} // namespace

bool Shape::contains(const Eigen::Vector2d& p) const {
    switch (kind) {
    case Kind::circle:
        return (p - center).norm() <= radius;
    case Kind::triangle: {
        const double d0 = cross2(vertices[1] - vertices[0], p - vertices[0]);
        const double d1 = cross2(vertices[2] - vertices[1], p - vertices[1]);
        const double d2 = cross2(vertices[0] - vertices[2], p - vertices[2]);
        const bool any_neg = d0 < 0 || d1 < 0 || d2 < 0;
        const bool any_pos = d0 > 0 || d1 > 0 || d2 > 0;
        return !(any_neg && any_pos);
    }
    case Kind::tshape: {
        const Eigen::Vector2d q = p - center;
        const double top = 0.5 * (arm_length + width);
        const bool bar = std::abs(q.x()) <= 0.5 * arm_length && q.y() >= top - width && q.y() <= top;
        const bool stem =
            std::abs(q.x()) <= 0.5 * width && q.y() >= top - width - arm_length && q.y() <= top - width;
        return bar || stem;
    }
    case Kind::ellipse: {
        const Eigen::Vector2d q = Eigen::Rotation2Dd(-rotation) * (p - center);
        const double nx = q.x() / semi_minor, ny = q.y() / semi_major;
        return nx * nx + ny * ny <= 1.0;
    }
    }
    return false;
}

void Shape::bbox(Eigen::Vector2d& lo, Eigen::Vector2d& hi) const {
    switch (kind) {
    case Kind::circle:
        lo = center.array() - radius;
        hi = center.array() + radius;
        return;
    case Kind::triangle:
        lo = vertices[0].cwiseMin(vertices[1]).cwiseMin(vertices[2]);
        hi = vertices[0].cwiseMax(vertices[1]).cwiseMax(vertices[2]);
        return;
    case Kind::tshape:
        lo = center - Eigen::Vector2d(0.5 * arm_length, 0.5 * (arm_length + width));
        hi = center + Eigen::Vector2d(0.5 * arm_length, 0.5 * (arm_length + width));
        return;
    case Kind::ellipse: {
        const double r = std::max(semi_major, semi_minor); // conservative
        lo = center.array() - r;
        hi = center.array() + r;
        return;
    }
    }
}

Shape make_circle(Eigen::Vector2d center, double radius, double eps_r, double sigma) {
    if (radius <= 0.0) throw ConfigError("circle radius must be positive");
    Shape s;
    s.kind = Shape::Kind::circle;
    s.center = center;
    s.radius = radius;
    s.eps_r = eps_r;
    s.sigma = sigma;
    return s;
}

Shape make_triangle(Eigen::Vector2d center, double area, double eps_r, double sigma) {
    if (area <= 0.0) throw ConfigError("triangle area must be positive");
    const double side = std::sqrt(4.0 * area / std::sqrt(3.0));
    const double rc = side / std::sqrt(3.0); // circumradius
    Shape s;
    s.kind = Shape::Kind::triangle;
    s.center = center;
    for (int v = 0; v < 3; ++v) {
        const double ang = 0.5 * constants::pi + v * 2.0 * constants::pi / 3.0;
        s.vertices[v] = center + rc * Eigen::Vector2d(std::cos(ang), std::sin(ang));
    }
    s.eps_r = eps_r;
    s.sigma = sigma;
    return s;
}

Shape make_tshape(Eigen::Vector2d center, double arm_length, double width, double eps_r,
                  double sigma) {
    if (arm_length <= 0.0 || width <= 0.0 || width > arm_length)
        throw ConfigError("t-shape needs 0 < width <= arm length");
    Shape s;
    s.kind = Shape::Kind::tshape;
    s.center = center;
    s.arm_length = arm_length;
    s.width = width;
    s.eps_r = eps_r;
    s.sigma = sigma;
    return s;
}

Shape make_ellipse(Eigen::Vector2d center, double major_axis, double minor_axis, double rotation,
                   double eps_r, double sigma) {
    if (major_axis <= 0.0 || minor_axis <= 0.0 || minor_axis > major_axis)
        throw ConfigError("ellipse needs 0 < minor axis <= major axis");
    Shape s;
    s.kind = Shape::Kind::ellipse;
    s.center = center;
    s.semi_major = 0.5 * major_axis;
    s.semi_minor = 0.5 * minor_axis;
    s.rotation = rotation;
    s.eps_r = eps_r;
    s.sigma = sigma;
    return s;
}

Scene build_scene(const SceneSpec& spec, double omega_c) {
    const Grid2D& grid = spec.grid;
    if (grid.size() == 0) throw ConfigError("scene grid is empty");
    const double half = 0.5 * grid.extent_m;
    for (size_t s = 0; s < spec.shapes.size(); ++s) {
        Eigen::Vector2d lo, hi;
        spec.shapes[s].bbox(lo, hi);
        if (lo.x() < -half || lo.y() < -half || hi.x() > half || hi.y() > half) {
            std::ostringstream msg;
            msg << "shape " << s << " leaves the grid extent (" << grid.extent_m << " m)";
            throw ConfigError(msg.str());
        }
    }

    Eigen::VectorXd eps_r = Eigen::VectorXd::Ones(grid.size());
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(grid.size());
    for (int p = 0; p < grid.size(); ++p)
        for (const Shape& sh : spec.shapes)
            if (sh.contains(grid.centers[p])) {
                eps_r[p] = sh.eps_r;
                sigma[p] = sh.sigma;
            }

    Scene scene;
    scene.spec = spec;
    scene.chi = contrast_from_scene(grid, eps_r, sigma, omega_c);
    scene.true_support = contrast_support(scene.chi.chi);
    return scene;
}

SceneSpec reference_scene(const std::string& name, const Grid2D& grid) {
    SceneSpec spec;
    spec.name = name;
    spec.grid = grid;
    if (name == "circle") {
        spec.shapes.push_back(make_circle({0.0, 0.0}, 0.5, 1.5));
    } else if (name == "triangle") {
        spec.shapes.push_back(make_triangle({0.0, 0.0}, 0.65, 2.0));
    } else if (name == "tshape") {
        spec.shapes.push_back(make_tshape({0.0, 0.0}, 1.1, 0.24, 1.5));
    } else if (name == "ellipse_pair_030" || name == "ellipse_pair_010") {
        const double spacing = name == "ellipse_pair_030" ? 0.3 : 0.1;
        // Half-pixel offset keeps both ellipses off the shared pixel-center
        // column so the tight spacing still yields two components at 36 px.
        const double x0 = 0.5 * grid.cell_side();
        spec.shapes.push_back(make_ellipse({x0 - 0.5 * spacing, 0.0}, 0.12, 0.055, 0.0, 2.0));
        spec.shapes.push_back(make_ellipse({x0 + 0.5 * spacing, 0.0}, 0.12, 0.055, 0.0, 2.0));
    } else if (name == "empty") {
        // no shapes
    } else {
        throw ConfigError("unknown scene '" + name + "'");
    }
    return spec;
}

ShrinkSchedule shrink_schedule(int L_max, int L_min, int steps) {
    if (steps < 2) throw ConfigError("schedule needs at least 2 steps");
    if (L_min > L_max || L_min < 1) throw ConfigError("schedule needs 1 <= L_min <= L_max");
    ShrinkSchedule sch;
    sch.L_max = L_max;
    sch.L_min = L_min;
    sch.steps = steps;
    for (int o = 1; o <= steps; ++o) {
        const double side =
            double(L_max) - double(o - 1) * double(L_max - L_min) / double(steps - 1);
        sch.sides.push_back(static_cast<int>(std::lround(side)));
        sch.pixel_counts.push_back(sch.sides.back() * sch.sides.back());
    }
    return sch;
}

std::pair<int, int> support_bbox_center(const std::vector<int>& support, int grid_side) {
    if (support.empty()) return {grid_side / 2, grid_side / 2};
    int rmin = grid_side, rmax = -1, cmin = grid_side, cmax = -1;
    for (int p : support) {
        const int r = p / grid_side, c = p % grid_side;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    return {(rmin + rmax) / 2, (cmin + cmax) / 2};
}

double nmse_db(const Eigen::VectorXcd& chi_hat, const Eigen::VectorXcd& chi_true) {
    const double denom = chi_true.squaredNorm();
    if (denom == 0.0) throw ConfigError("NMSE undefined for a zero true contrast");
    const double ratio = (chi_hat - chi_true).squaredNorm() / denom;
    return std::max(10.0 * std::log10(std::max(ratio, 0.0)), -300.0);
}

} // namespace iscat
