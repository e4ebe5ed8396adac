#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mcsl/dirichlet.hpp"
#include "mcsl/harness.hpp"
#include "mcsl/heat_periodic.hpp"
#include "mcsl/rng.hpp"

using namespace mcsl;

namespace {
constexpr double kPi = 3.14159265358979323846;

DirichletConfig reference_setup(std::uint64_t seed) {
    DirichletConfig cfg;
    cfg.a = -1.0;
    cfg.b = 1.0;
    cfg.nu = 0.1;
    cfg.dt = 0.01;
    cfg.dx = 0.01;
    cfg.n_interior = 10;
    cfg.n_boundary = 100;
    cfg.tau = 0.001;
    cfg.boundary_margin = 0.1;
    cfg.t_final = 0.1;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}
}  // namespace

TEST_CASE("config and grid validation") {
    DirichletConfig bad = reference_setup(1);
    bad.tau = 0.003;  // does not divide dt
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = reference_setup(1);
    bad.n_boundary = 5;  // fewer than n_interior
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = reference_setup(1);
    bad.dx = 0.013;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const BoundedGrid1D grid(-1.0, 1.0, 0.01);
    CHECK(grid.cells == 200);
    CHECK(grid.node(0) == -1.0);
    CHECK(grid.node(200) == doctest::Approx(1.0).epsilon(1e-15));

    const DirichletConfig cfg = reference_setup(1);
    CHECK(cfg.substeps_per_step() == 10);
    CHECK(cfg.in_boundary_zone(-0.95));
    CHECK(cfg.in_boundary_zone(0.95));
    CHECK_FALSE(cfg.in_boundary_zone(0.0));
    CHECK_FALSE(cfg.in_boundary_zone(-0.9));  // zone is [a, a+margin)
}

TEST_CASE("bridge exit probability formula") {
    CHECK(bridge_exit_probability(1.0, 0.97, 1.0, 4e-4) == 1.0);
    CHECK(bridge_exit_probability(0.95, 0.97, 1.0, 0.002 * 2.0 * 0.1) ==
          doctest::Approx(std::exp(-7.5)).epsilon(1e-14));
    CHECK(std::exp(-7.5) == doctest::Approx(5.53084e-4).epsilon(1e-5));
    // ten standard deviations away: vanishing probability
    const double var = 1e-4;
    CHECK(bridge_exit_probability(1.0 - 10.0 * std::sqrt(var), 1.0 - 11.0 * std::sqrt(var),
                                  1.0, var) < 1e-20);
    CHECK_THROWS_AS(bridge_exit_probability(0.95, 1.01, 1.0, var), std::invalid_argument);
    CHECK_THROWS_AS(bridge_exit_probability(0.95, 0.97, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("first-eigenfunction decay") {
    CHECK(exact_dirichlet_eigen(0.0, 0.3, 0.1) ==
          doctest::Approx(std::sin(kPi * 1.3 / 2.0)).epsilon(1e-15));
    CHECK(std::abs(exact_dirichlet_eigen(0.5, -1.0, 0.1)) < 1e-15);
    CHECK(std::abs(exact_dirichlet_eigen(0.5, 1.0, 0.1)) < 1e-15);
    CHECK(exact_dirichlet_eigen(0.1, 0.0, 0.1) ==
          doctest::Approx(std::exp(-0.0025 * kPi * kPi)).epsilon(1e-15));
    CHECK(exact_dirichlet_eigen(0.1, 0.0, 0.1) == doctest::Approx(0.97562).epsilon(1e-5));
}

TEST_CASE("zero data stays zero and boundaries stay pinned") {
    const DirichletConfig cfg = reference_setup(2);
    const BoundedGrid1D grid(cfg.a, cfg.b, cfg.dx);
    BoundedGridFunction zero{grid, Eigen::VectorXd::Zero(grid.cells + 1)};
    const BoundedGridFunction out = mc_step_dirichlet(zero, cfg, 0);
    CHECK(out.values.cwiseAbs().maxCoeff() == 0.0);

    const BoundedGridFunction u0 = project_bounded(
        [&](double x) { return exact_dirichlet_eigen(0.0, x, cfg.nu); }, grid);
    const BoundedGridFunction stepped = mc_step_dirichlet(u0, cfg, 0);
    CHECK(stepped.values[0] == 0.0);
    CHECK(stepped.values[grid.cells] == 0.0);
}

TEST_CASE("killing only removes mass") {
    const DirichletConfig cfg = reference_setup(3);
    const BoundedGrid1D grid(cfg.a, cfg.b, cfg.dx);
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    BoundedGridFunction u{grid, Eigen::VectorXd(grid.cells + 1)};
    for (Eigen::Index j = 0; j <= grid.cells; ++j) u.values[j] = dist(gen);
    u.values[0] = 0.0;
    u.values[grid.cells] = 0.0;
    const double peak = u.values.cwiseAbs().maxCoeff();
    const BoundedGridFunction out = mc_step_dirichlet(u, cfg, 0);
    CHECK(out.values.cwiseAbs().maxCoeff() <= peak * (1.0 + 1e-13));
}

TEST_CASE("far from the boundary the killed walk matches the periodic step") {
    // Bump supported well inside (0,1); tiny diffusion so no walker can exit.
    const auto bump = [](double x) {
        const double r = (x - 0.5) / 0.2;
        return std::abs(r) < 1.0 ? (1.0 - r * r) * (1.0 - r * r) : 0.0;
    };
    DirichletConfig dcfg;
    dcfg.a = 0.0;
    dcfg.b = 1.0;
    dcfg.nu = 1e-4;
    dcfg.dt = 0.01;
    dcfg.dx = 0.01;
    dcfg.n_interior = 100;
    dcfg.n_boundary = 100;
    dcfg.tau = 0.01;
    dcfg.boundary_margin = 0.05;
    dcfg.t_final = 0.01;
    dcfg.validate();

    HeatConfig pcfg;
    pcfg.nu = dcfg.nu;
    pcfg.dt = dcfg.dt;
    pcfg.grid = PeriodicGrid1D(100);
    pcfg.n_mc = 100;
    pcfg.t_final = 0.01;

    const BoundedGrid1D grid(dcfg.a, dcfg.b, dcfg.dx);
    const BoundedGridFunction ub = project_bounded(bump, grid);
    const GridFunction1D up = project(bump, pcfg.grid);

    const int trials = 1000;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
        dcfg.seed = pcfg.seed = derive_subseed(777, static_cast<std::uint64_t>(t));
        const BoundedGridFunction bo = mc_step_dirichlet(ub, dcfg, 0);
        const GridFunction1D po = mc_step(up, pcfg, 0);
        const double d = bo.values[50] - po.values[50];
        sum += d;
        sumsq += d * d;
    }
    const double mean = sum / trials;
    const double se = std::sqrt(std::max(0.0, sumsq / trials - mean * mean) / trials);
    CHECK(std::abs(mean) <= 4.0 * se + 1e-12);
    // with matched keys and no kill events the coupling is in fact exact
    CHECK(std::abs(mean) < 1e-14);
}

TEST_CASE("wider margins and finer substeps never add survival weight") {
    // all-ones data: the node value is exactly the survival fraction
    const auto ones = [](double) { return 1.0; };
    const int runs = 40;

    const auto total_mass = [&](double margin, double tau, std::uint64_t seed) {
        DirichletConfig cfg;
        cfg.nu = 0.5;
        cfg.dt = 0.01;
        cfg.dx = 0.02;
        cfg.n_interior = 50;
        cfg.n_boundary = 50;
        cfg.tau = tau;
        cfg.boundary_margin = margin;
        cfg.t_final = 0.01;
        cfg.seed = seed;
        cfg.validate();
        const BoundedGrid1D grid(cfg.a, cfg.b, cfg.dx);
        const BoundedGridFunction u0 = project_bounded(ones, grid);
        return mc_step_dirichlet(u0, cfg, 0).values.sum();
    };

    double margin_diff_sum = 0.0, margin_diff_sq = 0.0;
    double tau_diff_sum = 0.0, tau_diff_sq = 0.0;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed = derive_subseed(313, static_cast<std::uint64_t>(r));
        const double narrow = total_mass(0.1, 0.002, seed);
        const double wide = total_mass(0.2, 0.002, seed);
        const double coarse = total_mass(0.1, 0.01, seed);
        const double fine = total_mass(0.1, 0.001, seed);
        margin_diff_sum += wide - narrow;
        margin_diff_sq += (wide - narrow) * (wide - narrow);
        tau_diff_sum += fine - coarse;
        tau_diff_sq += (fine - coarse) * (fine - coarse);
    }
    const double md = margin_diff_sum / runs;
    const double mse = std::sqrt((margin_diff_sq / runs - md * md) / runs);
    CHECK(md <= 4.0 * mse);  // wider margin must not add mass
    const double td = tau_diff_sum / runs;
    const double tse = std::sqrt((tau_diff_sq / runs - td * td) / runs);
    CHECK(td <= 4.0 * tse);  // finer substeps must not add mass
}

TEST_CASE("without the bridge test and refinement the zones are inert") {
    DirichletConfig flat = reference_setup(5);
    flat.use_bridge_test = false;
    flat.tau = flat.dt;
    flat.n_boundary = flat.n_interior;

    DirichletConfig no_zone = flat;
    no_zone.boundary_margin = 0.0;

    const BoundedGrid1D grid(flat.a, flat.b, flat.dx);
    const BoundedGridFunction u0 = project_bounded(
        [&](double x) { return exact_dirichlet_eigen(0.0, x, flat.nu); }, grid);
    const BoundedGridFunction a = mc_step_dirichlet(u0, flat, 0);
    const BoundedGridFunction b = mc_step_dirichlet(u0, no_zone, 0);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("runs are bit-identical across thread counts") {
    const DirichletConfig cfg = reference_setup(6);
    const auto u0 = [&](double x) { return exact_dirichlet_eigen(0.0, x, cfg.nu); };
    const DirichletRunResult one = run_dirichlet(cfg, u0, 1);
    const DirichletRunResult many = run_dirichlet(cfg, u0, 4);
    CHECK((one.final.values - many.final.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reference-setup run stays close to the eigen decay") {
    const DirichletConfig cfg = reference_setup(271828);
    const DirichletRunResult result =
        run_dirichlet(cfg, [&](double x) { return exact_dirichlet_eigen(0.0, x, cfg.nu); });
    CHECK(result.l2_error < 0.1);
    CHECK(result.final.values[0] == 0.0);
    CHECK(result.final.values[result.final.grid.cells] == 0.0);
}

TEST_CASE("quadrupling the interior sample halves the error") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::HeatDirichlet;
    cfg.seed = 1618;
    cfg.dirichlet = DirichletRunSpec{};

    cfg.dirichlet.n_interior = 10;
    cfg.dirichlet.n_boundary = 100;
    const McErrorEstimate e10 = estimate_mc_error(cfg, 20);

    cfg.dirichlet.n_interior = 40;
    cfg.dirichlet.n_boundary = 400;
    const McErrorEstimate e40 = estimate_mc_error(cfg, 20);

    const double ratio = std::sqrt(e10.mean_sq_l2 / e40.mean_sq_l2);
    CHECK(ratio >= 1.4);
    CHECK(ratio <= 2.8);
}

TEST_CASE("error decays with order about one half in the mesh" * doctest::timeout(300)) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Convergence;
    cfg.seed = 9092;
    cfg.convergence.pde = "heat_dirichlet";
    cfg.convergence.n_values = {50, 100, 200, 400};
    cfg.convergence.n_mc_values = {10};
    cfg.convergence.repetitions = 20;
    cfg.convergence.nu = 0.1;
    cfg.convergence.t_final = 0.1;
    const ConvergenceTable table = convergence_study(cfg);
    REQUIRE(table.slopes.size() == 1);
    CHECK(table.slopes[0].slope >= -0.8);
    CHECK(table.slopes[0].slope <= -0.2);
}
