#pragma once

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qlm {

namespace detail {

inline double simpson(const std::function<double(double)>& g, double a, double b, double fa,
                      double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& g, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = g(lm), frm = g(rm);
    const double left = simpson(g, a, m, fa, flm, fm);
    const double right = simpson(g, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a,b].
inline double integrate(const std::function<double(double)>& g, double a, double b,
                        double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    const double whole = detail::simpson(g, a, b, fa, fm, fb);
    const double scale = std::max({std::abs(fa), std::abs(fm), std::abs(fb), 1.0});
    return detail::adaptive_simpson_rec(g, a, b, fa, fm, fb, whole,
                                        tol * scale * std::max(std::abs(b - a), 1.0), max_depth);
}

/// Integrate g on [a,b] where g may carry an integrable 1/sqrt(r-a) singularity
/// at the lower endpoint. Substitutes u = sqrt(r-a), which removes it.
inline double integrate_sqrt_singular_lo(const std::function<double(double)>& g, double a, double b,
                                         double tol = 1e-10) {
    if (b <= a) return 0.0;
    const double ub = std::sqrt(b - a);
    // g(r) 2u is finite at u=0 for 1/sqrt singularities. Evaluate a hair
    // inside, far enough that a + u^2 > a survives rounding.
    const double u_min =
        std::sqrt(std::numeric_limits<double>::epsilon() * std::max({std::abs(a), b - a, 1.0}));
    auto gu = [&](double u) {
        if (u < u_min) u = u_min;
        const double r = a + u * u;
        return g(r) * 2.0 * u;
    };
    return integrate(gu, 0.0, ub, tol);
}

}  // namespace qlm
