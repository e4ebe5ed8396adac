#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

namespace mcsl {

/// Uniform grid on [a,b] with nodes x_j = a + j*dx, j = 0..cells.
struct BoundedGrid1D {
    double a = -1.0;
    double b = 1.0;
    Eigen::Index cells = 0;
    double dx = 0.0;

    BoundedGrid1D() = default;
    BoundedGrid1D(double lo, double hi, double spacing);

    double node(Eigen::Index j) const { return a + static_cast<double>(j) * dx; }
};

/// Nodal values with homogeneous Dirichlet conditions: the first and last
/// values are exactly zero at all times.
struct BoundedGridFunction {
    BoundedGrid1D grid;
    Eigen::VectorXd values;
};

struct DirichletConfig {
    double a = -1.0;
    double b = 1.0;
    double nu = 0.1;
    double dt = 0.01;
    double dx = 0.01;
    int n_interior = 10;
    int n_boundary = 100;
    double tau = 0.001;            // sub-step in the boundary zone; divides dt
    double boundary_margin = 0.1;  // zones [a, a+margin) and (b-margin, b]
    double t_final = 0.1;
    std::uint64_t seed = 0;
    bool use_bridge_test = true;

    Eigen::Index step_count() const {
        return static_cast<Eigen::Index>(std::llround(t_final / dt));
    }
    int substeps_per_step() const { return static_cast<int>(std::llround(dt / tau)); }
    bool in_boundary_zone(double x) const {
        return x < a + boundary_margin || x > b - boundary_margin;
    }
    void validate() const;
};

/// Piecewise-linear interpolation on the bounded grid. The caller guarantees
/// a <= x <= b; surviving walkers never leave the domain.
inline double interpolate_bounded(const BoundedGridFunction& u, double x) {
    const auto& g = u.grid;
    double s = (x - g.a) / g.dx;
    if (s < 0.0) s = 0.0;
    Eigen::Index j = static_cast<Eigen::Index>(s);
    if (j >= g.cells) j = g.cells - 1;
    double frac = s - static_cast<double>(j);
    if (frac > 1.0) frac = 1.0;
    return u.values[j] + (u.values[j + 1] - u.values[j]) * frac;
}

/// Probability that a Brownian bridge from x0 to x1 (variance = sigma^2 * tau
/// over the sub-step) crossed the barrier in between:
/// exp(-2 (barrier-x0)(barrier-x1) / variance).
/// Both points must lie strictly on the same side of the barrier.
inline double bridge_exit_probability(double x0, double x1, double barrier,
                                      double variance) {
    const double d0 = barrier - x0;
    const double d1 = barrier - x1;
    if (d0 * d1 < 0.0) {
        throw std::invalid_argument("bridge_exit_probability: endpoint beyond the barrier");
    }
    if (!(variance > 0.0)) throw std::invalid_argument("bridge_exit_probability: variance must be > 0");
    return std::exp(-2.0 * d0 * d1 / variance);
}

/// One step of the killed-diffusion scheme. Interior-zone nodes take a single
/// sub-step of size dt with n_interior walkers; boundary-zone nodes take
/// dt/tau sub-steps of size tau with n_boundary walkers plus the bridge exit
/// test. A walker that leaves (a,b), or whose bridge test fires, contributes 0.
BoundedGridFunction mc_step_dirichlet(const BoundedGridFunction& u,
                                      const DirichletConfig& cfg,
                                      std::uint32_t step, unsigned threads = 1);

/// exp(-nu (pi/(b-a))^2 t) * sin(pi (x-a)/(b-a)): decay of the first
/// Dirichlet eigenfunction on (a,b).
double exact_dirichlet_eigen(double t, double x, double nu, double a = -1.0,
                             double b = 1.0);

/// Projects u0 onto the grid (boundary values forced to zero).
template <typename F>
BoundedGridFunction project_bounded(F&& f, const BoundedGrid1D& grid) {
    BoundedGridFunction u{grid, Eigen::VectorXd(grid.cells + 1)};
    for (Eigen::Index j = 0; j <= grid.cells; ++j) u.values[j] = f(grid.node(j));
    u.values[0] = 0.0;
    u.values[grid.cells] = 0.0;
    return u;
}

/// sqrt(dx * sum u_j^2) on the bounded grid.
inline double norm_l2_bounded(const BoundedGridFunction& u) {
    return std::sqrt(u.grid.dx) * u.values.norm();
}

struct DirichletRunResult {
    BoundedGridFunction final;
    double l2_error = 0.0;
    double sup_error = 0.0;
};

/// Runs the scheme from the projected u0 and reports the distance to the
/// first-eigenfunction decay at t_final.
template <typename F>
DirichletRunResult run_dirichlet(const DirichletConfig& cfg, F&& u0,
                                 unsigned threads = 1);

namespace detail {
DirichletRunResult run_dirichlet_impl(const DirichletConfig& cfg,
                                      const BoundedGridFunction& start,
                                      unsigned threads);
}

template <typename F>
DirichletRunResult run_dirichlet(const DirichletConfig& cfg, F&& u0, unsigned threads) {
    cfg.validate();
    const BoundedGrid1D grid(cfg.a, cfg.b, cfg.dx);
    return detail::run_dirichlet_impl(cfg, project_bounded(u0, grid), threads);
}

}  // namespace mcsl
