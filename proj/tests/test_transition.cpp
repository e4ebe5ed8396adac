#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mcsl/grid.hpp"
#include "mcsl/rng.hpp"
#include "mcsl/transition.hpp"
#include "quadrature_oracle.hpp"

using namespace mcsl;

namespace {
constexpr double kTwoPi = 6.28318530717958647692;

GridFunction1D random_state(const PeriodicGrid1D& grid, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction1D u{grid, Eigen::VectorXd(grid.m_s)};
    for (Eigen::Index j = 0; j < grid.m_s; ++j) u.values[j] = dist(gen);
    return u;
}
}  // namespace

TEST_CASE("kernel at sigma = 0 is the identity; negative sigma is rejected") {
    PeriodicGrid1D grid(8);
    const CirculantKernel k = q_kernel(grid, 0.0);
    CHECK(k.weights[0] == 1.0);
    CHECK(k.weights.tail(7).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(q_kernel(grid, -0.1), std::invalid_argument);
}

TEST_CASE("kernel at huge sigma flattens to dx") {
    PeriodicGrid1D grid(10);
    const CirculantKernel k = q_kernel(grid, 100.0);
    for (Eigen::Index d = 0; d < 10; ++d) {
        CHECK(k.weights[d] == doctest::Approx(0.1).epsilon(1e-10));
    }
}

TEST_CASE("closed-form kernel matches the quadrature oracle") {
    {
        PeriodicGrid1D grid(4);
        const double sigma = 0.1;
        const CirculantKernel k = q_kernel(grid, sigma);
        for (Eigen::Index d = 0; d < 4; ++d) {
            const double ref = oracle::q_entry(grid.node(d), grid.dx, sigma);
            CHECK(k.weights[d] == doctest::Approx(ref).epsilon(1e-12));
        }
    }
    {
        // wide kernel: the series evaluation route
        PeriodicGrid1D grid(64);
        const double sigma = 0.5;
        const CirculantKernel k = q_kernel(grid, sigma);
        for (Eigen::Index d = 0; d < 64; d += 7) {
            const double ref = oracle::q_entry(grid.node(d), grid.dx, sigma);
            CHECK(k.weights[d] == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("both kernel evaluation routes agree where they overlap") {
    const Eigen::Index m = 32;
    for (double sigma : {0.05, 0.2, 0.4}) {
        const Eigen::VectorXd a = detail::q_weights_image_sum(m, sigma);
        const Eigen::VectorXd b = detail::q_weights_theta_series(m, sigma);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("kernel structural properties at the experiment scale") {
    PeriodicGrid1D grid(64);
    const CirculantKernel k = q_kernel(grid, sigma_step(0.1, 0.01));
    const QPropertyReport report = verify_q_properties(k);
    CHECK(report.all_ok());
    CHECK(report.min_entry >= 0.0);
    CHECK(report.row_sum_deviation < 1e-12);
    CHECK(report.symmetry_deviation < 1e-12);
}

TEST_CASE("verify_q_properties flags broken kernels") {
    PeriodicGrid1D grid(8);
    CirculantKernel k = q_kernel(grid, 0.05);

    CirculantKernel asym = k;
    asym.weights[1] += 1e-6;
    CHECK_FALSE(verify_q_properties(asym).symmetric);

    CirculantKernel negative = k;
    negative.weights[3] = -1e-6;
    negative.weights[5] = -1e-6;  // keep it symmetric
    CHECK_FALSE(verify_q_properties(negative).nonnegative);
}

TEST_CASE("q_apply preserves constants and the identity kernel") {
    PeriodicGrid1D grid(33);
    GridFunction1D c{grid, Eigen::VectorXd::Constant(33, 0.8)};
    const CirculantKernel k = q_kernel(grid, 0.07);
    const GridFunction1D out = q_apply(k, c);
    for (Eigen::Index j = 0; j < 33; ++j) {
        CHECK(out.values[j] == doctest::Approx(0.8).epsilon(1e-13));
    }

    const CirculantKernel id = q_kernel(grid, 0.0);
    std::mt19937_64 gen(3);
    const GridFunction1D u = random_state(grid, gen);
    const GridFunction1D same = q_apply(id, u);
    CHECK((same.values - u.values).cwiseAbs().maxCoeff() == 0.0);

    PeriodicGrid1D other(5);
    GridFunction1D wrong{other, Eigen::VectorXd::Zero(5)};
    CHECK_THROWS_AS(q_apply(k, wrong), std::invalid_argument);
}

TEST_CASE("kernel application contracts both discrete norms") {
    PeriodicGrid1D grid(64);
    const CirculantKernel k = q_kernel(grid, sigma_step(0.1, 0.01));

    const GridFunction1D wave = project([](double x) { return std::cos(kTwoPi * x); }, grid);
    const GridFunction1D qwave = q_apply(k, wave);
    CHECK(norm_l2(qwave) <= norm_l2(wave));
    CHECK(seminorm_h1(qwave) <= seminorm_h1(wave));

    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 100; ++trial) {
        const GridFunction1D u = random_state(grid, gen);
        const GridFunction1D qu = q_apply(k, u);
        CHECK(norm_l2(qu) <= norm_l2(u) * (1.0 + 1e-12));
        CHECK(seminorm_h1(qu) <= seminorm_h1(u) * (1.0 + 1e-12));
    }
}

TEST_CASE("sampled transition matrices are row-stochastic with two-point rows") {
    std::mt19937_64 gen(5);
    for (Eigen::Index m : {8, 64, 512}) {
        PeriodicGrid1D grid(m);
        const double sigma = sigma_step(0.1, 0.01);
        for (int trial = 0; trial < 34; ++trial) {
            const auto step = static_cast<std::uint32_t>(gen() % 1000);
            const auto real = static_cast<std::uint32_t>(gen() % 1000);
            const std::uint64_t seed = gen();
            const TransitionSample sample = sample_p_matrix(grid, sigma, step, real, seed);
            CHECK(sample.entries.minCoeff() >= 0.0);
            for (Eigen::Index j = 0; j < m; ++j) {
                CHECK(std::abs(sample.entries.row(j).sum() - 1.0) < 1e-12);
                int nonzero = 0;
                for (Eigen::Index c = 0; c < m; ++c) {
                    if (sample.entries(j, c) != 0.0) ++nonzero;
                }
                CHECK(nonzero <= 2);
            }
        }
    }
}

TEST_CASE("sampling is deterministic in the seed; sigma = 0 gives the identity") {
    PeriodicGrid1D grid(16);
    const TransitionSample a = sample_p_matrix(grid, 0.05, 2, 3, 99);
    const TransitionSample b = sample_p_matrix(grid, 0.05, 2, 3, 99);
    CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
    const TransitionSample c = sample_p_matrix(grid, 0.05, 2, 3, 100);
    CHECK((a.entries - c.entries).cwiseAbs().maxCoeff() > 0.0);

    const TransitionSample id = sample_p_matrix(grid, 0.0, 0, 0, 1);
    CHECK((id.entries - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);

    PeriodicGrid1D huge(4097);
    CHECK_THROWS_AS(sample_p_matrix(huge, 0.05, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("entrywise mean of samples converges to the closed-form kernel") {
    PeriodicGrid1D grid(8);
    const double sigma = 0.15;
    const CirculantKernel q = q_kernel(grid, sigma);
    const int samples = 20000;
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(8, 8);
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(8, 8);
    for (int s = 0; s < samples; ++s) {
        const TransitionSample p =
            sample_p_matrix(grid, sigma, 0, static_cast<std::uint32_t>(s), 4242);
        const Eigen::MatrixXd delta = p.entries - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta.cwiseProduct(p.entries - mean);
    }
    for (Eigen::Index j = 0; j < 8; ++j) {
        for (Eigen::Index c = 0; c < 8; ++c) {
            const double expected = q.weights[((c - j) % 8 + 8) % 8];
            const double se = std::sqrt(m2(j, c) / (samples - 1.0) / samples);
            CHECK(std::abs(mean(j, c) - expected) <= 4.0 * se + 1e-12);
        }
    }
}

TEST_CASE("averaged sample keeps row sums and approaches the kernel") {
    PeriodicGrid1D grid(16);
    const double sigma = 0.08;
    const TransitionSample p = sample_p_matrix_avg(grid, sigma, 0, 200, 31);
    for (Eigen::Index j = 0; j < 16; ++j) {
        CHECK(std::abs(p.entries.row(j).sum() - 1.0) < 1e-12);
    }
    CHECK(p.kind == SampleKind::Averaged);
}

TEST_CASE("expected squared l2 norm does not grow through a sampled matrix") {
    PeriodicGrid1D grid(32);
    const double sigma = sigma_step(0.1, 0.01);
    std::mt19937_64 gen(6);
    const GridFunction1D u = random_state(grid, gen);
    const double base = norm_l2(u) * norm_l2(u);
    const int samples = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < samples; ++s) {
        const TransitionSample p =
            sample_p_matrix(grid, sigma, 1, static_cast<std::uint32_t>(s), 77);
        GridFunction1D pu{grid, p.entries * u.values};
        const double v = norm_l2(pu) * norm_l2(pu);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sumsq / samples - mean * mean) / samples);
    CHECK(mean <= base + 4.0 * se);
}

TEST_CASE("one-step variance is bounded by (2 nu dt + dx^2)/N times the h1 energy") {
    const double nu = 0.1;
    const int n_real = 10;
    const int trials = 1000;
    double fitted = 0.0;
    for (double dt : {1e-2, 1e-3}) {
        for (double dx : {1e-1, 1e-2}) {
            const auto m = static_cast<Eigen::Index>(std::llround(1.0 / dx));
            PeriodicGrid1D grid(m);
            const GridFunction1D u =
                project([](double x) { return std::sin(kTwoPi * x); }, grid);
            const double h1sq = seminorm_h1(u) * seminorm_h1(u);
            const CirculantKernel q = q_kernel(grid, sigma_step(nu, dt));
            const GridFunction1D qu = q_apply(q, u);
            double acc = 0.0;
            for (int t = 0; t < trials; ++t) {
                const TransitionSample p = sample_p_matrix_avg(
                    grid, sigma_step(nu, dt), 0, n_real, derive_subseed(505, t));
                GridFunction1D diff{grid, p.entries * u.values - qu.values};
                const double e = norm_l2(diff);
                acc += e * e;
            }
            const double mean = acc / trials;
            const double bound_unit = (2.0 * nu * dt + dx * dx) / n_real * h1sq;
            fitted = std::max(fitted, mean / bound_unit);
        }
    }
    CHECK(fitted <= 10.0);
}

TEST_CASE("h1 energy growth through sampled matrices stays within the expected factor") {
    const double nu = 0.1;
    const int n_real = 10;
    const int trials = 1000;
    double fitted = 0.0;
    for (double dt : {1e-2, 1e-3}) {
        for (double dx : {1e-1, 1e-2}) {
            const auto m = static_cast<Eigen::Index>(std::llround(1.0 / dx));
            PeriodicGrid1D grid(m);
            const GridFunction1D u =
                project([](double x) { return std::sin(kTwoPi * x); }, grid);
            const double h1sq = seminorm_h1(u) * seminorm_h1(u);
            double acc = 0.0;
            for (int t = 0; t < trials; ++t) {
                const TransitionSample p = sample_p_matrix_avg(
                    grid, sigma_step(nu, dt), 0, n_real, derive_subseed(606, t));
                GridFunction1D pu{grid, p.entries * u.values};
                const double h = seminorm_h1(pu);
                acc += h * h;
            }
            const double mean = acc / trials;
            const double unit = (2.0 * nu * dt + dx * dx) / (n_real * dx * dx);
            if (mean > h1sq) fitted = std::max(fitted, (mean / h1sq - 1.0) / unit);
        }
    }
    CHECK(fitted <= 10.0);
}

TEST_CASE("diagonal decay of the iterated kernel") {
    // unit-diffusivity normalization: one step has variance dt
    const double dt = 1e-3;
    const double sstep = std::sqrt(dt);
    PeriodicGrid1D grid(256);
    const Eigen::VectorXd diag = kernel_diag_decay(grid, sstep, 50);

    for (int i = 1; i < diag.size(); ++i) {
        CHECK(diag[i] <= diag[i - 1] + 1e-12);
    }
    // dx << sigma sqrt(2 ell) and 2 ell dt << 1 here, so the diagonal entry
    // times sqrt(2 ell dt)/dx stays under the free-space density bound
    for (int ell = 1; ell <= 50; ++ell) {
        const double ratio = diag[ell - 1] * std::sqrt(2.0 * ell * dt) / grid.dx;
        CHECK(ratio <= 1.0 / std::sqrt(2.0 * 3.14159265358979323846) + 0.01);
    }

    // long-time limit: the diagonal settles at dx, not 0
    const Eigen::VectorXd late = kernel_diag_decay(grid, 0.1, 800);
    CHECK(late[799] == doctest::Approx(grid.dx).epsilon(1e-9));

    CHECK_THROWS_AS(kernel_diag_decay(grid, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(kernel_diag_decay(grid, 0.1, 0), std::invalid_argument);
}
