#include "mcsl/heat_periodic.hpp"

#include <cmath>
#include <stdexcept>

#include "mcsl/parallel.hpp"
#include "mcsl/rng.hpp"

namespace mcsl {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

void HeatConfig::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("HeatConfig: nu must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("HeatConfig: dt must be > 0");
    if (n_mc < 1) throw std::invalid_argument("HeatConfig: n_mc must be >= 1");
    if (!(t_final > 0.0)) throw std::invalid_argument("HeatConfig: t_final must be > 0");
    const Eigen::Index mt = step_count();
    if (mt < 1 || std::abs(t_final - static_cast<double>(mt) * dt) > 1e-12 * t_final) {
        throw std::invalid_argument("HeatConfig: t_final must be an integer multiple of dt");
    }
}

GridFunction1D mc_step(const GridFunction1D& u, const HeatConfig& cfg,
                       std::uint32_t step, unsigned threads) {
    const Eigen::Index m = u.grid.m_s;
    const double sigma = cfg.sigma_step();
    const int n = cfg.n_mc;
    GridFunction1D out{u.grid, Eigen::VectorXd(m)};
    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t idx) {
        const auto j = static_cast<Eigen::Index>(idx);
        const double xj = u.grid.node(j);
        NoiseKey key;
        key.seed = cfg.seed;
        key.step = step;
        key.node = static_cast<std::uint64_t>(j);
        KahanSum acc;
        for (int r = 0; r < n; ++r) {
            key.realization = static_cast<std::uint32_t>(r);
            acc.add(interpolate(u, xj + sigma * gaussian(key)));
        }
        out.values[j] = acc.value() / static_cast<double>(n);
    });
    return out;
}

GridFunction1D deterministic_evolve(const GridFunction1D& u0, const HeatConfig& cfg,
                                    Eigen::Index n_steps) {
    if (n_steps < 0) throw std::invalid_argument("deterministic_evolve: n_steps must be >= 0");
    if (n_steps == 0) return u0;
    const CirculantKernel kernel = q_kernel(u0.grid, cfg.sigma_step());
    GridFunction1D state = u0;
    for (Eigen::Index n = 0; n < n_steps; ++n) state = q_apply(kernel, state);
    return state;
}

double exact_heat(double t, double x, double nu, int mode, WavePhase phase) {
    const double k = kTwoPi * static_cast<double>(mode);
    const double amp = std::exp(-k * k * nu * t);
    return amp * (phase == WavePhase::Sin ? std::sin(k * x) : std::cos(k * x));
}

GridFunction1D initial_wave(const PeriodicGrid1D& grid, WavePhase phase, int mode) {
    return project([&](double x) { return exact_heat(0.0, x, 1.0, mode, phase); }, grid);
}

HeatRunResult run_heat(const HeatConfig& cfg, const GridFunction1D& u0,
                       int record_every, unsigned threads) {
    cfg.validate();
    if (!(u0.grid == cfg.grid)) throw std::invalid_argument("run_heat: u0 grid mismatch");
    HeatRunResult result;
    result.record.record_every = record_every;
    GridFunction1D state = u0;
    const Eigen::Index mt = cfg.step_count();
    if (record_every > 0) {
        result.record.times.push_back(0.0);
        result.record.states.push_back(state);
    }
    for (Eigen::Index n = 0; n < mt; ++n) {
        state = mc_step(state, cfg, static_cast<std::uint32_t>(n), threads);
        const Eigen::Index done = n + 1;
        if (record_every > 0 && done % record_every == 0) {
            result.record.times.push_back(static_cast<double>(done) * cfg.dt);
            result.record.states.push_back(state);
        }
    }
    if (record_every <= 0) {
        result.record.times.push_back(static_cast<double>(mt) * cfg.dt);
        result.record.states.push_back(state);
    }
    result.final = std::move(state);
    return result;
}

ErrorPair error_vs_exact(const GridFunction1D& state, double t, double nu,
                         WavePhase phase, int mode) {
    const GridFunction1D exact =
        project([&](double x) { return exact_heat(t, x, nu, mode, phase); }, state.grid);
    GridFunction1D diff{state.grid, state.values - exact.values};
    return {norm_l2(diff), diff.values.cwiseAbs().maxCoeff()};
}

}  // namespace mcsl
