#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mcsl {

/// Uniform periodic grid on (0,1) with M_S nodes x_j = j*dx, dx = 1/M_S.
struct PeriodicGrid1D {
    Eigen::Index m_s = 0;
    double dx = 0.0;

    PeriodicGrid1D() = default;
    explicit PeriodicGrid1D(Eigen::Index nodes)
        : m_s(nodes), dx(1.0 / static_cast<double>(nodes)) {
        if (nodes < 2) throw std::invalid_argument("PeriodicGrid1D: need at least 2 nodes");
    }

    // Coordinates are always recomputed from the index; never accumulated.
    double node(Eigen::Index j) const { return static_cast<double>(j) * dx; }

    friend bool operator==(const PeriodicGrid1D& lhs, const PeriodicGrid1D& rhs) {
        return lhs.m_s == rhs.m_s;
    }
};

/// Nodal values u_j on a periodic grid, extended by u_{M_S} = u_0.
struct GridFunction1D {
    PeriodicGrid1D grid;
    Eigen::VectorXd values;
};

/// Reduces x to [0,1). floor-based so that negative arguments wrap correctly.
inline double wrap_unit(double x) {
    double f = x - std::floor(x);
    return f < 1.0 ? f : 0.0;
}

/// Periodic piecewise-linear hat centered at node k: 1 at x_k, 0 at every
/// other node, support of width 2*dx per period.
inline double hat_eval(const PeriodicGrid1D& grid, Eigen::Index k, double x) {
    if (k < 0 || k >= grid.m_s) throw std::out_of_range("hat_eval: node index out of range");
    double w = x - grid.node(k);
    w -= std::floor(w + 0.5);  // nearest periodic image, in [-1/2, 1/2)
    const double t = std::abs(w) / grid.dx;
    return t < 1.0 ? 1.0 - t : 0.0;
}

/// Piecewise-linear interpolant of the nodal values at an arbitrary point,
/// periodic in x. Always a convex combination of the two straddling nodes.
inline double interpolate(const GridFunction1D& u, double x) {
    const Eigen::Index m = u.grid.m_s;
    const double s = wrap_unit(x) * static_cast<double>(m);
    Eigen::Index j = static_cast<Eigen::Index>(s);
    double frac = s - static_cast<double>(j);
    if (j >= m) {  // x*m rounded up to m
        j = m - 1;
        frac = 1.0;
    }
    const double left = u.values[j];
    const double right = u.values[j + 1 == m ? 0 : j + 1];
    return left + (right - left) * frac;
}

/// Batched interpolation; the solver hot path evaluates one state at many
/// displaced points.
inline void interpolate_many(const GridFunction1D& u, const double* xs,
                             double* out, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) out[i] = interpolate(u, xs[i]);
}

/// Nodal projection: values[j] = f(x_j).
template <typename F>
GridFunction1D project(F&& f, const PeriodicGrid1D& grid) {
    GridFunction1D u{grid, Eigen::VectorXd(grid.m_s)};
    for (Eigen::Index j = 0; j < grid.m_s; ++j) u.values[j] = f(grid.node(j));
    return u;
}

/// Discrete L2 norm: sqrt(dx * sum u_j^2).
inline double norm_l2(const GridFunction1D& u) {
    return std::sqrt(u.grid.dx) * u.values.norm();
}

/// Discrete H1 seminorm with periodic wrap: sqrt(dx * sum ((u_{j+1}-u_j)/dx)^2).
inline double seminorm_h1(const GridFunction1D& u) {
    const Eigen::Index m = u.grid.m_s;
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double d = u.values[j + 1 == m ? 0 : j + 1] - u.values[j];
        acc += d * d;
    }
    return std::sqrt(acc / u.grid.dx);
}

/// Squared L2 norm of the piecewise-linear interpolant, from the exact
/// tridiagonal Gram matrix of the hat basis:
///   (2 dx/3) sum u_k^2 + (dx/6) sum (u_k u_{k+1} + u_k u_{k-1}).
inline double interpolant_l2_norm_sq(const GridFunction1D& u) {
    const Eigen::Index m = u.grid.m_s;
    double diag = 0.0;
    double off = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        const double uk = u.values[k];
        diag += uk * uk;
        off += uk * (u.values[k + 1 == m ? 0 : k + 1] + u.values[k == 0 ? m - 1 : k - 1]);
    }
    return (2.0 * u.grid.dx / 3.0) * diag + (u.grid.dx / 6.0) * off;
}

}  // namespace mcsl
