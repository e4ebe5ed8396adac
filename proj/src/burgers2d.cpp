#include "mcsl/burgers2d.hpp"

#include <cmath>

#include "mcsl/dirichlet.hpp"  // bridge_exit_probability
#include "mcsl/parallel.hpp"
#include "mcsl/rng.hpp"

namespace mcsl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void BurgersConfig::validate() const {
    if (nu < 0.0) throw std::invalid_argument("BurgersConfig: nu must be >= 0");
    if (!(dt > 0.0) || !(dx > 0.0) || !(tau > 0.0)) {
        throw std::invalid_argument("BurgersConfig: dt, dx, tau must be > 0");
    }
    const Eigen::Index m = nodes_per_axis();
    if (m < 3 || std::abs(static_cast<double>(m - 1) * dx - 2.0) > 1e-12 * 2.0) {
        throw std::invalid_argument("BurgersConfig: dx must divide the domain side");
    }
    const int sub = substeps_per_step();
    if (sub < 1 || std::abs(dt - static_cast<double>(sub) * tau) > 1e-12 * dt) {
        throw std::invalid_argument("BurgersConfig: tau must divide dt");
    }
    if (n_interior < 1 || n_boundary < n_interior) {
        throw std::invalid_argument("BurgersConfig: need n_boundary >= n_interior >= 1");
    }
    if (!(interior_halfwidth > 0.0) || !(interior_halfwidth < 1.0)) {
        throw std::invalid_argument("BurgersConfig: interior_halfwidth must be in (0,1)");
    }
    if (!(t_final > 0.0)) throw std::invalid_argument("BurgersConfig: t_final must be > 0");
    const Eigen::Index mt = step_count();
    if (mt < 1 || std::abs(t_final - static_cast<double>(mt) * dt) > 1e-12 * t_final) {
        throw std::invalid_argument("BurgersConfig: t_final must be an integer multiple of dt");
    }
}

double bilinear_interp(const Grid2D& grid, const Eigen::MatrixXd& field, double x,
                       double y) {
    if (x < -1.0 || x > 1.0 || y < -1.0 || y > 1.0) {
        throw std::invalid_argument("bilinear_interp: point outside the closed domain");
    }
    double sx = (x + 1.0) / grid.dx;
    double sy = (y + 1.0) / grid.dx;
    if (sx < 0.0) sx = 0.0;
    if (sy < 0.0) sy = 0.0;
    Eigen::Index i = static_cast<Eigen::Index>(sx);
    Eigen::Index j = static_cast<Eigen::Index>(sy);
    if (i > grid.m - 2) i = grid.m - 2;
    if (j > grid.m - 2) j = grid.m - 2;
    double fx = sx - static_cast<double>(i);
    double fy = sy - static_cast<double>(j);
    if (fx > 1.0) fx = 1.0;
    if (fy > 1.0) fy = 1.0;
    return (1.0 - fx) * (1.0 - fy) * field(i, j) + fx * (1.0 - fy) * field(i + 1, j) +
           (1.0 - fx) * fy * field(i, j + 1) + fx * fy * field(i + 1, j + 1);
}

Vec2 forcing_at(double t, double x, double y, ForcingKind kind) {
    if (kind == ForcingKind::None) return {};
    const double st = std::sin(kPi * t);
    const double sx = std::sin(kPi * x);
    const double sy = std::sin(kPi * y);
    return {-st * sx * sy * sy, -st * sx * sx * sy};
}

VectorField2D burgers_step(const VectorField2D& u, const BurgersConfig& cfg,
                           std::uint32_t step, unsigned threads) {
    const Grid2D& g = u.grid;
    const Eigen::Index m = g.m;
    const Eigen::Index inner = m - 2;
    VectorField2D out = VectorField2D::zero(g);
    const double t_frozen = static_cast<double>(step) * cfg.dt;
    const auto tasks = static_cast<std::size_t>(2 * inner * inner);

    parallel_for(tasks, threads, [&](std::size_t task) {
        const auto per_comp = static_cast<std::size_t>(inner * inner);
        const int comp = task < per_comp ? 0 : 1;
        const std::size_t rem = task - static_cast<std::size_t>(comp) * per_comp;
        const Eigen::Index i = 1 + static_cast<Eigen::Index>(rem) / inner;
        const Eigen::Index j = 1 + static_cast<Eigen::Index>(rem) % inner;
        const double xi = g.coord(i);
        const double yj = g.coord(j);

        const bool boundary_zone = !(std::abs(xi) < cfg.interior_halfwidth &&
                                     std::abs(yj) < cfg.interior_halfwidth);
        const int n_sub = boundary_zone ? cfg.substeps_per_step() : 1;
        const double h = boundary_zone ? cfg.tau : cfg.dt;
        const int n_real = boundary_zone ? cfg.n_boundary : cfg.n_interior;
        const double step_sd = std::sqrt(2.0 * cfg.nu * h);
        const double step_var = 2.0 * cfg.nu * h;
        const Eigen::MatrixXd& target = comp == 0 ? u.u1 : u.u2;

        NoiseKey walk;
        walk.seed = cfg.seed;
        walk.step = step;
        walk.node = (static_cast<std::uint64_t>(comp) * static_cast<std::uint64_t>(m) +
                     static_cast<std::uint64_t>(i)) * static_cast<std::uint64_t>(m) +
                    static_cast<std::uint64_t>(j);
        NoiseKey exit = walk;
        exit.stream = kStreamExitTest;

        KahanSum acc;
        for (int r = 0; r < n_real; ++r) {
            walk.realization = static_cast<std::uint32_t>(r);
            exit.realization = walk.realization;
            double px = xi;
            double py = yj;
            double contrib = 0.0;
            bool alive = true;
            for (int s = 0; s < n_sub; ++s) {
                if (cfg.forcing != ForcingKind::None) {
                    const Vec2 f = forcing_at(t_frozen, px, py, cfg.forcing);
                    contrib += h * (comp == 0 ? f.x : f.y);
                }
                const double drift_x = bilinear_interp(g, u.u1, px, py);
                const double drift_y = bilinear_interp(g, u.u2, px, py);
                walk.substep = static_cast<std::uint32_t>(s);
                walk.axis = 0;
                const double gx = gaussian(walk);
                walk.axis = 1;
                const double gy = gaussian(walk);
                const double nx = px - drift_x * h + step_sd * gx;
                const double ny = py - drift_y * h + step_sd * gy;
                if (nx <= -1.0 || nx >= 1.0 || ny <= -1.0 || ny >= 1.0) {
                    alive = false;
                    break;
                }
                if (boundary_zone && step_var > 0.0) {
                    // Independent per-axis bridge tests against the nearest
                    // face; survival is the product of per-axis survivals.
                    const double face_x = px + nx < 0.0 ? -1.0 : 1.0;
                    const double face_y = py + ny < 0.0 ? -1.0 : 1.0;
                    const double ex = bridge_exit_probability(px, nx, face_x, step_var);
                    const double ey = bridge_exit_probability(py, ny, face_y, step_var);
                    const double p_kill = 1.0 - (1.0 - ex) * (1.0 - ey);
                    if (p_kill > 0.0) {
                        exit.substep = walk.substep;
                        if (uniform01(exit) < p_kill) {
                            alive = false;
                            break;
                        }
                    }
                }
                px = nx;
                py = ny;
            }
            if (alive) contrib += bilinear_interp(g, target, px, py);
            acc.add(contrib);
        }
        (comp == 0 ? out.u1 : out.u2)(i, j) = acc.value() / static_cast<double>(n_real);
    });
    return out;
}

BurgersRunResult run_burgers(const BurgersConfig& cfg,
                             const std::vector<double>& snapshot_times,
                             unsigned threads) {
    cfg.validate();
    const Grid2D grid(cfg.nodes_per_axis());
    std::vector<Eigen::Index> snap_steps;
    snap_steps.reserve(snapshot_times.size());
    for (double t : snapshot_times) {
        const auto n = static_cast<Eigen::Index>(std::llround(t / cfg.dt));
        if (n < 1 || n > cfg.step_count() || std::abs(t - static_cast<double>(n) * cfg.dt) > 1e-9) {
            throw std::invalid_argument("run_burgers: snapshot times must be step multiples within (0, t_final]");
        }
        snap_steps.push_back(n);
    }

    BurgersRunResult result;
    VectorField2D state = VectorField2D::zero(grid);
    const Eigen::Index mt = cfg.step_count();
    for (Eigen::Index n = 0; n < mt; ++n) {
        state = burgers_step(state, cfg, static_cast<std::uint32_t>(n), threads);
        for (std::size_t k = 0; k < snap_steps.size(); ++k) {
            if (snap_steps[k] == n + 1) {
                result.snapshots.push_back({snapshot_times[k], state});
            }
        }
    }
    result.final = std::move(state);
    return result;
}

}  // namespace mcsl
