#include "mcsl/dirichlet.hpp"

#include <cmath>

#include "mcsl/parallel.hpp"
#include "mcsl/rng.hpp"

namespace mcsl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

BoundedGrid1D::BoundedGrid1D(double lo, double hi, double spacing)
    : a(lo), b(hi), dx(spacing) {
    if (!(hi > lo)) throw std::invalid_argument("BoundedGrid1D: need b > a");
    if (!(spacing > 0.0)) throw std::invalid_argument("BoundedGrid1D: need dx > 0");
    cells = static_cast<Eigen::Index>(std::llround((hi - lo) / spacing));
    if (cells < 2 || std::abs((hi - lo) - static_cast<double>(cells) * spacing) > 1e-12 * (hi - lo)) {
        throw std::invalid_argument("BoundedGrid1D: dx must divide the domain length");
    }
}

void DirichletConfig::validate() const {
    if (!(b > a)) throw std::invalid_argument("DirichletConfig: need b > a");
    if (!(nu > 0.0)) throw std::invalid_argument("DirichletConfig: nu must be > 0");
    if (!(dt > 0.0) || !(dx > 0.0) || !(tau > 0.0)) {
        throw std::invalid_argument("DirichletConfig: dt, dx, tau must be > 0");
    }
    const int sub = substeps_per_step();
    if (sub < 1 || std::abs(dt - static_cast<double>(sub) * tau) > 1e-12 * dt) {
        throw std::invalid_argument("DirichletConfig: tau must divide dt");
    }
    if (n_interior < 1 || n_boundary < n_interior) {
        throw std::invalid_argument("DirichletConfig: need n_boundary >= n_interior >= 1");
    }
    if (boundary_margin < 0.0 || 2.0 * boundary_margin > b - a) {
        throw std::invalid_argument("DirichletConfig: boundary_margin out of range");
    }
    if (!(t_final > 0.0)) throw std::invalid_argument("DirichletConfig: t_final must be > 0");
    const Eigen::Index mt = step_count();
    if (mt < 1 || std::abs(t_final - static_cast<double>(mt) * dt) > 1e-12 * t_final) {
        throw std::invalid_argument("DirichletConfig: t_final must be an integer multiple of dt");
    }
    BoundedGrid1D(a, b, dx);  // validates divisibility of the domain
}

BoundedGridFunction mc_step_dirichlet(const BoundedGridFunction& u,
                                      const DirichletConfig& cfg,
                                      std::uint32_t step, unsigned threads) {
    const auto& g = u.grid;
    BoundedGridFunction out{g, Eigen::VectorXd::Zero(g.cells + 1)};
    parallel_for(static_cast<std::size_t>(g.cells - 1), threads, [&](std::size_t idx) {
        const Eigen::Index j = 1 + static_cast<Eigen::Index>(idx);
        const double xj = g.node(j);
        const bool boundary_zone = cfg.in_boundary_zone(xj);
        const int n_sub = boundary_zone ? cfg.substeps_per_step() : 1;
        const double h = boundary_zone ? cfg.tau : cfg.dt;
        const int n_real = boundary_zone ? cfg.n_boundary : cfg.n_interior;
        const double step_sd = std::sqrt(2.0 * cfg.nu * h);
        const double step_var = 2.0 * cfg.nu * h;
        const bool bridge = boundary_zone && cfg.use_bridge_test;

        NoiseKey walk;
        walk.seed = cfg.seed;
        walk.step = step;
        walk.node = static_cast<std::uint64_t>(j);
        NoiseKey exit = walk;
        exit.stream = kStreamExitTest;

        KahanSum acc;
        for (int r = 0; r < n_real; ++r) {
            walk.realization = static_cast<std::uint32_t>(r);
            exit.realization = walk.realization;
            double x = xj;
            bool alive = true;
            for (int s = 0; s < n_sub; ++s) {
                walk.substep = static_cast<std::uint32_t>(s);
                const double next = x + step_sd * gaussian(walk);
                if (next <= cfg.a || next >= cfg.b) {
                    alive = false;
                    break;
                }
                if (bridge) {
                    const double mid = 0.5 * (x + next);
                    const double barrier = mid - cfg.a < cfg.b - mid ? cfg.a : cfg.b;
                    const double p = bridge_exit_probability(x, next, barrier, step_var);
                    if (p > 0.0) {
                        exit.substep = walk.substep;
                        if (uniform01(exit) < p) {
                            alive = false;
                            break;
                        }
                    }
                }
                x = next;
            }
            if (alive) acc.add(interpolate_bounded(u, x));
        }
        out.values[j] = acc.value() / static_cast<double>(n_real);
    });
    return out;
}

double exact_dirichlet_eigen(double t, double x, double nu, double a, double b) {
    const double k = kPi / (b - a);
    return std::exp(-nu * k * k * t) * std::sin(k * (x - a));
}

namespace detail {

DirichletRunResult run_dirichlet_impl(const DirichletConfig& cfg,
                                      const BoundedGridFunction& start,
                                      unsigned threads) {
    BoundedGridFunction state = start;
    const Eigen::Index mt = cfg.step_count();
    for (Eigen::Index n = 0; n < mt; ++n) {
        state = mc_step_dirichlet(state, cfg, static_cast<std::uint32_t>(n), threads);
    }
    DirichletRunResult result;
    double sup = 0.0;
    Eigen::VectorXd diff(state.grid.cells + 1);
    for (Eigen::Index j = 0; j <= state.grid.cells; ++j) {
        const double exact =
            exact_dirichlet_eigen(cfg.t_final, state.grid.node(j), cfg.nu, cfg.a, cfg.b);
        diff[j] = state.values[j] - exact;
        sup = std::max(sup, std::abs(diff[j]));
    }
    result.l2_error = std::sqrt(state.grid.dx) * diff.norm();
    result.sup_error = sup;
    result.final = std::move(state);
    return result;
}

}  // namespace detail

}  // namespace mcsl
