// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "iscat/contrast.hpp"
#include "iscat/grid.hpp"
#include "iscat/roi.hpp"

namespace iscat {

/// Geometric primitive with uniform material; a pixel belongs to the shape
/// when its center lies inside.
struct Shape {
    enum class Kind { circle, triangle, tshape, ellipse };
    Kind kind = Kind::circle;
    double eps_r = 1.0;
    double sigma = 0.0; // [S/m]

    Eigen::Vector2d center{0.0, 0.0};
    double radius = 0.0;                       // circle
    std::array<Eigen::Vector2d, 3> vertices{}; // triangle
    double arm_length = 0.0, width = 0.0;      // t-shape (bar atop stem)
    double semi_major = 0.0, semi_minor = 0.0; // ellipse, major along +y at rotation 0
    double rotation = 0.0;                     // [rad]

    bool contains(const Eigen::Vector2d& p) const;
    void bbox(Eigen::Vector2d& lo, Eigen::Vector2d& hi) const;
};

Shape make_circle(Eigen::Vector2d center, double radius, double eps_r, double sigma = 0.0);
/// Equilateral triangle of the given area, centroid at center, one vertex up.
Shape make_triangle(Eigen::Vector2d center, double area, double eps_r, double sigma = 0.0);
Shape make_tshape(Eigen::Vector2d center, double arm_length, double width, double eps_r,
                  double sigma = 0.0);
Shape make_ellipse(Eigen::Vector2d center, double major_axis, double minor_axis, double rotation,
                   double eps_r, double sigma = 0.0);

struct SceneSpec {
    std::string name;
    std::vector<Shape> shapes;
    Grid2D grid;
};

struct Scene {
    SceneSpec spec;
    ContrastMap chi;
    std::vector<int> true_support;
};

/// Rasterize the shape list onto the grid; later shapes overwrite earlier
/// ones where they overlap. Throws when a shape leaves the grid extent.
Scene build_scene(const SceneSpec& spec, double omega_c);

/// Named reference scenes on a square grid: "circle", "triangle", "tshape",
/// "ellipse_pair_030", "ellipse_pair_010", "empty".
SceneSpec reference_scene(const std::string& name, const Grid2D& grid);

struct ShrinkSchedule {
    int L_max = 0, L_min = 0, steps = 0;
    std::vector<int> sides;        // L_o per step
    std::vector<int> pixel_counts; // L_o^2
};

/// Linear side-length schedule from L_max to L_min with rounding.
ShrinkSchedule shrink_schedule(int L_max, int L_min, int steps);

/// Bounding-box center (row, col) of a support set, for schedule placement.
std::pair<int, int> support_bbox_center(const std::vector<int>& support, int grid_side);

/// 10 log10(||chi_hat - chi_true||^2 / ||chi_true||^2), floored at -300 dB.
double nmse_db(const Eigen::VectorXcd& chi_hat, const Eigen::VectorXcd& chi_true);

} // namespace iscat
