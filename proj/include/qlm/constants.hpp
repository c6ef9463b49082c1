#pragma once

#include <cmath>
#include <stdexcept>

namespace qlm {

inline constexpr double kPi = 3.14159265358979323846;

/// Area of the unit (n-1)-sphere in R^n: omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).
inline double unit_sphere_area(int n) {
    if (n < 2 || n > 8) throw std::invalid_argument("unit_sphere_area: dimension out of range [2,8]");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) { return unit_sphere_area(n) / n; }

/// c_n = 2 (n-1) omega_{n-1}, the normalization shared by the Lam functional
/// and the ADM limit identity.
inline double mass_normalization(int n) { return 2.0 * (n - 1) * unit_sphere_area(n); }

/// Isoperimetric constant: vol(Omega) <= C_n^{-1} |bdry|^{n/(n-1)} with
/// C_n = n^{n/(n-1)} vol(B_1)^{1/(n-1)}.
inline double isoperimetric_constant(int n) {
    const double e = 1.0 / (n - 1.0);
    return std::pow(double(n), n * e) * std::pow(unit_ball_volume(n), e);
}

}  // namespace qlm
