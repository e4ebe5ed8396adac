#pragma once

// Test-only oracles, kept independent of the library's evaluation paths.

#include <cmath>
#include <functional>

namespace oracle {

// Periodic unit-lattice hat of half-width dx, written from scratch (folding
// to the nearest integer) rather than reusing the library's hat.
inline double periodic_hat(double y, double dx) {
    const double w = y - std::nearbyint(y);
    const double t = std::abs(w) / dx;
    return t < 1.0 ? 1.0 - t : 0.0;
}

inline double gauss_pdf(double y, double mean, double sigma) {
    const double z = (y - mean) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * 2.5066282746310005024);
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double fa,
                      double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(const std::function<double(double)>& f, double a, double fa,
                       double b, double fb, double m, double fm, double whole,
                       double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    return detail::adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

// E[hat_0(x_d + sigma Z)] by piecewise quadrature of tent * Gaussian density,
// split at the tent kinks so every piece is smooth.
inline double q_entry(double x_d, double dx, double sigma, double tol = 1e-14) {
    double total = 0.0;
    const double reach = 10.0 * sigma + dx;
    const long lo = static_cast<long>(std::ceil(x_d - reach));
    const long hi = static_cast<long>(std::floor(x_d + reach));
    for (long image = lo; image <= hi; ++image) {
        const double c = static_cast<double>(image);
        const auto piece = [&](double y) {
            return (1.0 - std::abs(y - c) / dx) * gauss_pdf(y, x_d, sigma);
        };
        total += integrate(piece, c - dx, c, tol);
        total += integrate(piece, c, c + dx, tol);
    }
    return total;
}

}  // namespace oracle
