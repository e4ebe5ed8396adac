#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mcsl {

/// Uniform grid on the fixed domain (-1,1)^2; node (i,j) sits at
/// (-1 + i*dx, -1 + j*dx) with dx = 2/(m-1).
struct Grid2D {
    Eigen::Index m = 0;  // nodes per axis
    double dx = 0.0;

    Grid2D() = default;
    explicit Grid2D(Eigen::Index nodes)
        : m(nodes), dx(2.0 / static_cast<double>(nodes - 1)) {
        if (nodes < 3) throw std::invalid_argument("Grid2D: need at least 3 nodes per axis");
    }
    double coord(Eigen::Index i) const { return -1.0 + static_cast<double>(i) * dx; }

    friend bool operator==(const Grid2D& lhs, const Grid2D& rhs) { return lhs.m == rhs.m; }
};

/// Velocity field (u1,u2) on a Grid2D; zero on all boundary nodes.
/// Entry (i,j) of each matrix is the value at x-index i, y-index j.
struct VectorField2D {
    Grid2D grid;
    Eigen::MatrixXd u1;
    Eigen::MatrixXd u2;

    static VectorField2D zero(const Grid2D& grid) {
        return {grid, Eigen::MatrixXd::Zero(grid.m, grid.m),
                Eigen::MatrixXd::Zero(grid.m, grid.m)};
    }
};

enum class ForcingKind { None, SineProduct };

struct BurgersConfig {
    double nu = 0.001;
    double dt = 0.02;
    double dx = 0.04;
    int n_interior = 10;
    int n_boundary = 100;
    double tau = 0.002;               // boundary-zone sub-step; divides dt
    double interior_halfwidth = 0.8;  // interior zone (-hw,hw)^2
    double t_final = 2.0;
    std::uint64_t seed = 0;
    ForcingKind forcing = ForcingKind::SineProduct;

    Eigen::Index nodes_per_axis() const {
        return static_cast<Eigen::Index>(std::llround(2.0 / dx)) + 1;
    }
    Eigen::Index step_count() const {
        return static_cast<Eigen::Index>(std::llround(t_final / dt));
    }
    int substeps_per_step() const { return static_cast<int>(std::llround(dt / tau)); }
    void validate() const;
};

/// Tensor-product linear interpolation from the four surrounding nodes.
/// p must lie in the closed domain; exact on bilinear functions.
double bilinear_interp(const Grid2D& grid, const Eigen::MatrixXd& field, double x,
                       double y);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// -sin(pi t) * (sin(pi x) sin^2(pi y), sin^2(pi x) sin(pi y)), or zero.
Vec2 forcing_at(double t, double x, double y, ForcingKind kind);

/// One semi-implicit step: walkers start at each interior node, drift along
/// the frozen field -u^n (bilinearly interpolated), diffuse with sqrt(2 nu h)
/// per-axis increments, accumulate the frozen forcing by left-endpoint
/// rectangles, and are killed on leaving (-1,1)^2 (endpoint check everywhere,
/// per-axis bridge tests in the boundary zone). Each (node, component) task
/// owns a disjoint key range, so output is schedule-independent.
VectorField2D burgers_step(const VectorField2D& u, const BurgersConfig& cfg,
                           std::uint32_t step, unsigned threads = 1);

struct BurgersSnapshot {
    double time = 0.0;
    VectorField2D field;
};

struct BurgersRunResult {
    std::vector<BurgersSnapshot> snapshots;
    VectorField2D final;
};

/// Runs from u = 0, recording the state at each requested time (each must be
/// a multiple of dt).
BurgersRunResult run_burgers(const BurgersConfig& cfg,
                             const std::vector<double>& snapshot_times,
                             unsigned threads = 1);

}  // namespace mcsl
