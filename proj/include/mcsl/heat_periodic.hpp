#pragma once

#include <cstdint>
#include <vector>

#include "mcsl/grid.hpp"
#include "mcsl/transition.hpp"

namespace mcsl {

/// Full description of a periodic heat run: du/dt = nu u_xx on (0,1).
struct HeatConfig {
    double nu = 0.01;
    double dt = 0.01;
    PeriodicGrid1D grid{100};
    int n_mc = 100;        // realizations per node per step
    double t_final = 0.1;
    std::uint64_t seed = 0;

    Eigen::Index step_count() const {
        return static_cast<Eigen::Index>(std::llround(t_final / dt));
    }
    double sigma_step() const { return mcsl::sigma_step(nu, dt); }

    /// dx/dt * max(1, sqrt(|log dt|)); reported as a diagnostic, not enforced.
    double anti_cfl_ratio() const {
        return grid.dx / dt * std::max(1.0, std::sqrt(std::abs(std::log(dt))));
    }

    void validate() const;
};

/// States kept along a run, one every record_every steps (0 = final only).
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<GridFunction1D> states;
    int record_every = 0;
};

struct HeatRunResult {
    TrajectoryRecord record;
    GridFunction1D final;
};

enum class WavePhase { Sin, Cos };

/// One Monte-Carlo semi-Lagrangian step: node j averages the interpolated
/// previous state at x_j + sigma_step * g over n_mc keyed Gaussians. Output
/// values are convex combinations of the input, so min/max are preserved.
GridFunction1D mc_step(const GridFunction1D& u, const HeatConfig& cfg,
                       std::uint32_t step, unsigned threads = 1);

/// The expectation evolution v^{n+1} = Q v^n, applied n_steps times.
GridFunction1D deterministic_evolve(const GridFunction1D& u0, const HeatConfig& cfg,
                                    Eigen::Index n_steps);

/// exp(-(2 pi mode)^2 nu t) * {sin|cos}(2 pi mode x).
double exact_heat(double t, double x, double nu, int mode, WavePhase phase);

/// Nodal projection of a single Fourier mode, the experiments' u0.
GridFunction1D initial_wave(const PeriodicGrid1D& grid, WavePhase phase, int mode);

HeatRunResult run_heat(const HeatConfig& cfg, const GridFunction1D& u0,
                       int record_every = 0, unsigned threads = 1);

struct ErrorPair {
    double l2 = 0.0;
    double sup = 0.0;
};

/// Discrete L2 and max-abs distance from the exact single-mode solution at time t.
ErrorPair error_vs_exact(const GridFunction1D& state, double t, double nu,
                         WavePhase phase, int mode);

}  // namespace mcsl
