#include "mcsl/transition.hpp"

#include <cmath>
#include <stdexcept>

#include "mcsl/rng.hpp"

namespace mcsl {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// psi(t) = phi(t) - t * Phi(-t) for t >= 0: the smooth excess of the ramp
// expectation E[(t + Z)^+] over max(t, 0). Decays like phi(t)/t^2.
double ramp_excess(double t) {
    if (t > 38.0) return 0.0;
    const double density = kInvSqrt2Pi * std::exp(-0.5 * t * t);
    const double tail = 0.5 * std::erfc(t * kInvSqrt2);
    return density - t * tail;
}

// E[hat((Y - c)/dx)] for Y ~ N(mean, sigma^2), via the second difference of
// E[(Y - c)^+]. The piecewise-linear part telescopes to the hat itself, so
// only the bounded ramp_excess terms are summed and no large terms cancel.
double tent_expectation(double dist, double dx, double sigma) {
    const double a = std::abs(dist);
    const double hinge = a < dx ? 1.0 - a / dx : 0.0;
    const double t0 = std::abs(dist) / sigma;
    const double tp = std::abs(dist + dx) / sigma;
    const double tm = std::abs(dist - dx) / sigma;
    const double corr = ramp_excess(tp) - 2.0 * ramp_excess(t0) + ramp_excess(tm);
    return hinge + (sigma / dx) * corr;
}

}  // namespace

namespace detail {

Eigen::VectorXd q_weights_image_sum(Eigen::Index m_s, double sigma) {
    const double dx = 1.0 / static_cast<double>(m_s);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(m_s);
    // Gaussian mass beyond 9 sigma is ~1e-19, below the 1e-16 truncation rule.
    const double reach = 9.0 * sigma + dx;
    for (Eigen::Index d = 0; d <= m_s / 2; ++d) {
        const double y = static_cast<double>(d) * dx;
        const auto lo = static_cast<long>(std::ceil(y - reach));
        const auto hi = static_cast<long>(std::floor(y + reach));
        double total = 0.0;
        for (long image = lo; image <= hi; ++image) {
            total += tent_expectation(y - static_cast<double>(image), dx, sigma);
        }
        q[d] = total;
        if (d > 0 && d < m_s - d) q[m_s - d] = total;
    }
    return q;
}

Eigen::VectorXd q_weights_theta_series(Eigen::Index m_s, double sigma) {
    const double dx = 1.0 / static_cast<double>(m_s);
    const double decay = 2.0 * kPi * kPi * sigma * sigma;
    // exp(-46) ~ 1e-20: everything past kmax is invisible in double precision.
    const long kmax = std::max(1L, static_cast<long>(std::ceil(std::sqrt(46.0 / decay))));
    Eigen::VectorXd coef(kmax + 1);
    coef[0] = dx;
    for (long k = 1; k <= kmax; ++k) {
        const double s = std::sin(kPi * k * dx) / (kPi * k * dx);
        coef[k] = dx * s * s * std::exp(-decay * static_cast<double>(k) * k);
    }
    Eigen::VectorXd q(m_s);
    for (Eigen::Index d = 0; d <= m_s / 2; ++d) {
        double total = coef[0];
        const double angle = 2.0 * kPi * static_cast<double>(d) / static_cast<double>(m_s);
        for (long k = 1; k <= kmax; ++k) {
            total += 2.0 * coef[k] * std::cos(angle * static_cast<double>(k));
        }
        q[d] = total;
        if (d > 0 && d < m_s - d) q[m_s - d] = total;
    }
    return q;
}

}  // namespace detail

CirculantKernel q_kernel(const PeriodicGrid1D& grid, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("q_kernel: sigma must be >= 0");
    CirculantKernel kernel{grid, Eigen::VectorXd::Zero(grid.m_s), sigma};
    if (sigma == 0.0) {
        kernel.weights[0] = 1.0;
        return kernel;
    }
    kernel.weights = sigma >= 16.0 * grid.dx
                         ? detail::q_weights_theta_series(grid.m_s, sigma)
                         : detail::q_weights_image_sum(grid.m_s, sigma);
    // True entries are strictly positive; rounding may leave ~1e-18 noise.
    kernel.weights = kernel.weights.cwiseMax(0.0);
    return kernel;
}

GridFunction1D q_apply(const CirculantKernel& kernel, const GridFunction1D& u) {
    if (!(kernel.grid == u.grid)) throw std::invalid_argument("q_apply: grid mismatch");
    const Eigen::Index m = kernel.grid.m_s;
    constexpr double kSupportCut = 1e-16;

    Eigen::Index half = 0;
    for (Eigen::Index d = 1; d <= m / 2; ++d) {
        if (kernel.weights[d] > kSupportCut || kernel.weights[m - d] > kSupportCut) half = d;
    }

    GridFunction1D out{u.grid, Eigen::VectorXd(m)};
    if (2 * half + 1 >= m) {
        // Full support: plain circulant product.
        for (Eigen::Index j = 0; j < m; ++j) {
            double acc = 0.0;
            for (Eigen::Index d = 0; d < m; ++d) {
                acc += kernel.weights[d] * u.values[(j + d) % m];
            }
            out.values[j] = acc;
        }
        return out;
    }

    const Eigen::Index width = 2 * half + 1;
    Eigen::VectorXd taps(width);
    for (Eigen::Index o = -half; o <= half; ++o) {
        taps[o + half] = kernel.weights[((o % m) + m) % m];
    }
    Eigen::VectorXd padded(m + 2 * half);
    for (Eigen::Index i = 0; i < padded.size(); ++i) {
        padded[i] = u.values[((i - half) % m + m) % m];
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        out.values[j] = taps.dot(padded.segment(j, width));
    }
    return out;
}

namespace {

void add_sample_row(Eigen::MatrixXd& entries, const PeriodicGrid1D& grid,
                    double sigma, std::uint32_t step, std::uint32_t realization,
                    std::uint64_t seed, Eigen::Index j, double weight) {
    const Eigen::Index m = grid.m_s;
    NoiseKey key;
    key.seed = seed;
    key.step = step;
    key.realization = realization;
    key.node = static_cast<std::uint64_t>(j);
    const double y = grid.node(j) + sigma * gaussian(key);
    const double s = wrap_unit(y) * static_cast<double>(m);
    Eigen::Index left = static_cast<Eigen::Index>(s);
    double frac = s - static_cast<double>(left);
    if (left >= m) {
        left = m - 1;
        frac = 1.0;
    }
    entries(j, left) += weight * (1.0 - frac);
    entries(j, left + 1 == m ? 0 : left + 1) += weight * frac;
}

}  // namespace

TransitionSample sample_p_matrix(const PeriodicGrid1D& grid, double sigma,
                                 std::uint32_t step, std::uint32_t realization,
                                 std::uint64_t seed) {
    if (grid.m_s > 4096) throw std::invalid_argument("sample_p_matrix: verification scale is M_S <= 4096");
    TransitionSample sample{grid, Eigen::MatrixXd::Zero(grid.m_s, grid.m_s),
                            SampleKind::PerRealization};
    if (sigma == 0.0) {
        sample.entries.setIdentity();
        return sample;
    }
    for (Eigen::Index j = 0; j < grid.m_s; ++j) {
        add_sample_row(sample.entries, grid, sigma, step, realization, seed, j, 1.0);
    }
    return sample;
}

TransitionSample sample_p_matrix_avg(const PeriodicGrid1D& grid, double sigma,
                                     std::uint32_t step, int n_realizations,
                                     std::uint64_t seed) {
    if (grid.m_s > 4096) throw std::invalid_argument("sample_p_matrix_avg: verification scale is M_S <= 4096");
    if (n_realizations < 1) throw std::invalid_argument("sample_p_matrix_avg: need at least one realization");
    TransitionSample sample{grid, Eigen::MatrixXd::Zero(grid.m_s, grid.m_s),
                            SampleKind::Averaged};
    if (sigma == 0.0) {
        sample.entries.setIdentity();
        return sample;
    }
    const double weight = 1.0 / static_cast<double>(n_realizations);
    for (int r = 0; r < n_realizations; ++r) {
        for (Eigen::Index j = 0; j < grid.m_s; ++j) {
            add_sample_row(sample.entries, grid, sigma, step,
                           static_cast<std::uint32_t>(r), seed, j, weight);
        }
    }
    return sample;
}

QPropertyReport verify_q_properties(const CirculantKernel& kernel, double tol) {
    const Eigen::Index m = kernel.grid.m_s;
    QPropertyReport report;
    report.min_entry = kernel.weights.minCoeff();
    report.row_sum_deviation = std::abs(kernel.weights.sum() - 1.0);
    double sym = 0.0;
    for (Eigen::Index d = 1; d < m; ++d) {
        sym = std::max(sym, std::abs(kernel.weights[d] - kernel.weights[m - d]));
    }
    report.symmetry_deviation = sym;
    report.nonnegative = report.min_entry >= -tol;
    report.row_stochastic = report.row_sum_deviation <= tol;
    report.symmetric = report.symmetry_deviation <= tol;
    return report;
}

Eigen::VectorXd kernel_diag_decay(const PeriodicGrid1D& grid, double sigma_step,
                                  int ell_max) {
    if (!(sigma_step > 0.0)) throw std::invalid_argument("kernel_diag_decay: sigma_step must be > 0");
    if (ell_max < 1) throw std::invalid_argument("kernel_diag_decay: ell_max must be >= 1");
    Eigen::VectorXd diag(ell_max);
    for (int ell = 1; ell <= ell_max; ++ell) {
        const double sigma = sigma_step * std::sqrt(2.0 * static_cast<double>(ell));
        diag[ell - 1] = q_kernel(grid, sigma).weights[0];
    }
    return diag;
}

}  // namespace mcsl
