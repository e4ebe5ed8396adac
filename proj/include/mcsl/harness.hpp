#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcsl/burgers2d.hpp"
#include "mcsl/dirichlet.hpp"
#include "mcsl/heat_periodic.hpp"
#include "mcsl/output.hpp"

namespace mcsl {

enum class ExperimentKind { HeatPeriodic, HeatDirichlet, Burgers2d, Convergence, Verify };

struct WaveInitial {
    WavePhase phase = WavePhase::Sin;
    int mode = 1;
};

struct HeatRunSpec {
    double nu = 0.01;
    double dt = 0.01;
    Eigen::Index m_s = 100;
    int n_mc = 100;
    double t_final = 0.1;
    WaveInitial initial;
};

struct DirichletRunSpec {
    double a = -1.0;
    double b = 1.0;
    double nu = 0.1;
    double dt = 0.01;
    double dx = 0.01;
    int n_interior = 10;
    int n_boundary = 100;
    double tau = 0.001;
    double boundary_margin = 0.1;
    double t_final = 0.1;
    bool use_bridge_test = true;
};

struct BurgersRunSpec {
    double nu = 0.001;
    double dt = 0.02;
    double dx = 0.04;
    int n_interior = 10;
    int n_boundary = 100;
    double tau = 0.002;
    double interior_halfwidth = 0.8;
    double t_final = 2.0;
    std::string forcing = "sine_product";
    std::vector<double> snapshot_times = {0.5, 1.0, 1.5, 2.0};
};

struct ConvergenceSpec {
    std::string pde = "heat_periodic";  // or "heat_dirichlet"
    std::vector<int> n_values = {50, 100, 200, 400};
    std::vector<int> n_mc_values = {10, 20, 40, 80};
    int repetitions = 20;
    double nu = 0.1;
    double t_final = 0.1;
    WaveInitial initial{WavePhase::Cos, 1};
    // heat_dirichlet refinement layout, as in the bounded-domain experiment
    double boundary_margin = 0.1;
    int nb_over_ni = 10;
    int tau_refine = 10;
};

struct VerifySpec {
    Eigen::Index m_s = 64;
    double nu = 0.1;
    double dt = 0.01;
    Eigen::Index p_m_s = 32;
    int p_samples = 100;
    int decay_ell_max = 64;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::HeatPeriodic;
    std::uint64_t seed = 20260809;
    std::string output_dir = "out";
    unsigned threads = 1;
    int record_every = 0;
    HeatRunSpec heat;
    DirichletRunSpec dirichlet;
    BurgersRunSpec burgers;
    ConvergenceSpec convergence;
    VerifySpec verify;
};

HeatConfig to_heat_config(const HeatRunSpec& spec, std::uint64_t seed);
DirichletConfig to_dirichlet_config(const DirichletRunSpec& spec, std::uint64_t seed);
BurgersConfig to_burgers_config(const BurgersRunSpec& spec, std::uint64_t seed);

/// Reference used when measuring the error of a run.
enum class ReferenceKind { Exact, DeterministicEvolve };

struct McErrorEstimate {
    double mean_sq_l2 = 0.0;
    double halfwidth95 = 0.0;
    std::vector<double> per_rep;
};

/// Repeats the configured solver `reps` times with derived sub-seeds and
/// returns the sample mean of the squared final-time l2 error plus a 95%
/// normal-approximation halfwidth. Supports the heat_periodic and
/// heat_dirichlet kinds.
McErrorEstimate estimate_mc_error(const ExperimentConfig& cfg, int reps,
                                  ReferenceKind reference = ReferenceKind::Exact);

/// Least-squares slope of ys against xs; residual is the RMS misfit.
SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

/// Sweeps (n, N) with dt = dx = 1/n, estimating the mean-square error per
/// cell and fitting the log10(RMS) vs log10(n) slope per N.
ConvergenceTable convergence_study(const ExperimentConfig& cfg);

/// Geometric-mean RMS-error ratio between two n_mc series of a table.
double series_error_ratio(const ConvergenceTable& table, int n_mc_a, int n_mc_b);

struct BoundReport {
    double a_nu = 0.0;  // 1 + dx/(sqrt(nu) dt) + dx^2/(nu dt^2) (1 + |log dt|)
    double b_nu = 0.0;  // (nu + dx^2/dt) |u0|^2_h1
    double rhs[3] = {0.0, 0.0, 0.0};  // |u0|^2_h1 (1+dx^2/dt) a_nu^p (dt/N + 1/N^{p+1})
    double anti_cfl_ratio = 0.0;
    double u0_h1_sq = 0.0;
};

/// Diagnostic evaluation of the error-bound quantities with all constants 1.
BoundReport error_bound_report(const HeatConfig& cfg, const GridFunction1D& u0);

std::string bound_report_text(const BoundReport& report);

/// Runs the configured experiment and writes its artifacts under
/// cfg.output_dir. Returns the paths written.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg);

/// Structural-property verification report (text form) for the verify kind.
std::string verify_report_text(const ExperimentConfig& cfg);

}  // namespace mcsl
