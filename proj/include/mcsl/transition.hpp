#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "mcsl/grid.hpp"

namespace mcsl {

/// Noise standard deviation accumulated over one step of length dt for the
/// equation du/dt = nu * u_xx.
inline double sigma_step(double nu, double dt) { return std::sqrt(2.0 * nu * dt); }

/// The exact one-step expectation operator, stored as a kernel row:
/// weights[d] = Q_{j, j+d mod M_S} = E[phi_0(x_d + sigma * Z)], Z ~ N(0,1).
/// Row-stochastic, symmetric (weights[d] == weights[M_S-d]), hence bistochastic.
struct CirculantKernel {
    PeriodicGrid1D grid;
    Eigen::VectorXd weights;
    double sigma = 0.0;
};

/// Builds the expectation kernel in closed form. sigma == 0 gives the
/// identity kernel; sigma < 0 is rejected.
CirculantKernel q_kernel(const PeriodicGrid1D& grid, double sigma);

/// Circular convolution (Qu)_j = sum_d weights[d] * u_{j+d mod M_S}, with the
/// support truncated to weights above 1e-16.
GridFunction1D q_apply(const CirculantKernel& kernel, const GridFunction1D& u);

enum class SampleKind { PerRealization, Averaged };

/// A sampled transition matrix, dense; verification scale only (M_S <= 4096).
/// Per-realization samples have at most two nonzero entries per row.
struct TransitionSample {
    PeriodicGrid1D grid;
    Eigen::MatrixXd entries;
    SampleKind kind = SampleKind::PerRealization;
};

/// Samples one realization: row j holds the hat values at x_j + sigma * g
/// where g is the keyed Gaussian for (step, realization, j).
TransitionSample sample_p_matrix(const PeriodicGrid1D& grid, double sigma,
                                 std::uint32_t step, std::uint32_t realization,
                                 std::uint64_t seed);

/// Average of n_realizations independent samples at a fixed step index.
TransitionSample sample_p_matrix_avg(const PeriodicGrid1D& grid, double sigma,
                                     std::uint32_t step, int n_realizations,
                                     std::uint64_t seed);

/// Executable check of the structural properties of a kernel.
struct QPropertyReport {
    bool nonnegative = false;
    bool row_stochastic = false;
    bool symmetric = false;
    double min_entry = 0.0;
    double row_sum_deviation = 0.0;
    double symmetry_deviation = 0.0;

    bool all_ok() const { return nonnegative && row_stochastic && symmetric; }
};

QPropertyReport verify_q_properties(const CirculantKernel& kernel, double tol = 1e-12);

/// Diagonal entries of the exact 2*ell-step kernels (variance 2*ell*sigma_step^2)
/// for ell = 1..ell_max; used to check the dx/sqrt(2 ell dt) diagonal decay.
Eigen::VectorXd kernel_diag_decay(const PeriodicGrid1D& grid, double sigma_step,
                                  int ell_max);

namespace detail {

// Both evaluation routes are exact in exact arithmetic; they are split by
// conditioning. The image sum is used for sigma up to ~16 dx, the theta
// series beyond, where the image sum would lose digits to cancellation.
Eigen::VectorXd q_weights_image_sum(Eigen::Index m_s, double sigma);
Eigen::VectorXd q_weights_theta_series(Eigen::Index m_s, double sigma);

}  // namespace detail

}  // namespace mcsl
