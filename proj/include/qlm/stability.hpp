#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qlm/constants.hpp"
#include "qlm/level_set.hpp"
#include "qlm/mass.hpp"
#include "qlm/ode.hpp"
#include "qlm/quadrature.hpp"

namespace qlm {

/// Threshold area T(xi, m) = 2 (1+xi)^{(n-1)/(n-2)} w_{n-1} (2m)^{(n-1)/(n-2)}.
inline double threshold_area(int n, double xi, double mass) {
    const double e = double(n - 1) / double(n - 2);
    return 2.0 * std::pow(1.0 + xi, e) * unit_sphere_area(n) * std::pow(2.0 * mass, e);
}

namespace detail {

/// V(h) for any field: radial closed form when available, extraction otherwise.
inline double level_area(const ScalarField& fld, double h) {
    if (fld.radial && fld.radial->monotone) {
        const auto& rp = *fld.radial;
        if (h < rp.f_min() || h > rp.f_max()) return 0.0;
        const double r = rp.radius_of_height(h);
        return unit_sphere_area(fld.dim()) * std::pow(r, fld.dim() - 1);
    }
    return extract_level_set(fld, h).area();
}

}  // namespace detail

/// Threshold height: sup of heights whose level area stays at or below T.
/// Empty set gives inf(f).
inline double compute_h_o(const ScalarField& fld, double xi, double mass, int ladder = 200) {
    if (!(mass > 0.0)) throw std::domain_error("compute_h_o: requires positive mass");
    if (!(xi >= 1.0)) throw std::invalid_argument("compute_h_o: xi must be >= 1");
    const int n = fld.dim();
    const double t_area = threshold_area(n, xi, mass);
    const double lo = fld.min_value(), hi = fld.max_value();

    if (fld.radial && fld.radial->monotone && fld.radial->increasing) {
        // V(h) = w r(h)^{n-1} is increasing; invert directly.
        const auto& rp = *fld.radial;
        const double r_o = std::pow(t_area / unit_sphere_area(n), 1.0 / (n - 1));
        if (r_o <= rp.r_min) return lo;   // area above threshold everywhere
        if (r_o >= rp.r_max) return hi;
        return rp.f(r_o);
    }

    double best = lo;
    bool found = false;
    double prev_h = lo, prev_ok = true;  // V -> 0 at inf(f)
    for (int k = 1; k <= ladder; ++k) {
        const double h = lo + (hi - lo) * double(k) / double(ladder + 1);
        const bool ok = detail::level_area(fld, h) <= t_area;
        if (ok) {
            best = h;
            found = true;
        } else if (prev_ok) {
            // Crossing inside (prev_h, h): refine by bisection.
            double a = prev_h, b = h;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (a + b);
                (detail::level_area(fld, mid) <= t_area ? a : b) = mid;
            }
            best = std::max(best, a);
            found = true;
        }
        prev_h = h;
        prev_ok = ok;
    }
    return found ? best : lo;
}

// ---- first-variation lower bounds ----------------------------------------

struct VprimeBound {
    double vprime = 0.0;  // first-variation integral
    double bound = 0.0;
    double margin = 0.0;  // vprime - bound
};

/// One-parameter lower bound: V'(h) > (1/a)[ int Hdeg - (1 + 1/a^2) c_n m ].
inline VprimeBound vprime_lower_bound_check(const ScalarField& fld, double h, double alpha,
                                            double mass) {
    if (!(alpha > 0.0)) throw std::invalid_argument("vprime bound: alpha must be positive");
    const LevelSet ls = extract_level_set(fld, h);
    if (!ls.regular || ls.empty())
        throw std::domain_error("vprime bound: irregular or empty height rejected");
    VprimeBound r;
    r.vprime = surface_integral(ls, [](const Facet& fc) { return fc.H_deg / fc.grad_norm; });
    const double total_h = surface_integral(ls, [](const Facet& fc) { return fc.H_deg; });
    r.bound = (total_h - (1.0 + 1.0 / (alpha * alpha)) * mass_normalization(fld.dim()) * mass) / alpha;
    r.margin = r.vprime - r.bound;
    return r;
}

struct OptimizedVprimeBound {
    double vprime = 0.0;
    double bound = 0.0;     // c_n (2m/(3 sqrt 3)) p^{3/2}
    double margin = 0.0;
    double p = 0.0;         // (1/(2m))(V/w)^{(n-2)/(n-1)} - 1
    double alpha_star = 0.0;
    bool sweep_confirms_optimum = false;
};

/// alpha-optimized bound. Substituting the Minkowski lower bound for int Hdeg
/// turns the one-parameter bound into g(a) = c_n m (p/a - 1/a^3), maximized at
/// a* = sqrt(3) p^{-1/2} with value (2 c_n m /(3 sqrt 3)) p^{3/2}.
inline OptimizedVprimeBound vprime_optimized_bound_check(const ScalarField& fld, double h,
                                                         double mass) {
    const int n = fld.dim();
    const LevelSet ls = extract_level_set(fld, h);
    if (!ls.regular || ls.empty())
        throw std::domain_error("optimized vprime bound: irregular or empty height rejected");
    const double w = unit_sphere_area(n);
    const double area = ls.area();
    if (!(area > w * std::pow(2.0 * mass, double(n - 1) / double(n - 2))))
        throw std::domain_error(
            "optimized vprime bound: hypothesis V(h) > w (2m)^{(n-1)/(n-2)} violated");
    OptimizedVprimeBound r;
    r.vprime = surface_integral(ls, [](const Facet& fc) { return fc.H_deg / fc.grad_norm; });
    r.p = std::pow(area / w, double(n - 2) / double(n - 1)) / (2.0 * mass) - 1.0;
    const double cn = mass_normalization(n);
    r.bound = cn * 2.0 * mass / (3.0 * std::sqrt(3.0)) * std::pow(r.p, 1.5);
    r.margin = r.vprime - r.bound;
    r.alpha_star = std::sqrt(3.0 / r.p);
    // Log-spaced sweep of g(a); the maximum must sit at a* within 0.1%.
    auto g = [&](double a) { return cn * mass * (r.p / a - 1.0 / (a * a * a)); };
    double sweep_max = -1e300;
    const int sweep = 400;
    for (int k = 0; k <= sweep; ++k) {
        const double a = r.alpha_star * std::pow(10.0, -2.0 + 4.0 * double(k) / sweep);
        sweep_max = std::max(sweep_max, g(a));
    }
    r.sweep_confirms_optimum = sweep_max <= g(r.alpha_star) * (1.0 + 1e-3) + 1e-12;
    return r;
}

// ---- ODE comparison ------------------------------------------------------

struct OdeComparison {
    double h_o = 0.0;
    OdeTrace Y;
    size_t checked = 0;
    size_t violations = 0;  // ladder heights with Y(h) > V(h) + tolerance
    double worst_excess = 0.0;
    bool trivial = false;   // h_o at the top of the range, nothing to integrate
};

/// Comparison solution: Y' = (2 c_n /(3 sqrt 3)) m p(Y)^{3/2} from
/// Y(h_o) = w (1+xi)^{(n-1)/(n-2)} (2m)^{(n-1)/(n-2)}; conclusion Y <= V above h_o.
inline OdeComparison ode_comparison(const ScalarField& fld, double mass, double xi,
                                    int steps = 1000, int ladder = 200) {
    const int n = fld.dim();
    OdeComparison res;
    res.h_o = compute_h_o(fld, xi, mass);
    const double top = fld.max_value();
    if (!(res.h_o < top - 1e-14 * (1.0 + std::abs(top)))) {
        res.trivial = true;
        return res;
    }
    const double w = unit_sphere_area(n);
    const double e = double(n - 1) / double(n - 2);
    const double y0 = w * std::pow(1.0 + xi, e) * std::pow(2.0 * mass, e);
    auto bracket = [&](double y) {
        return std::pow(y / w, double(n - 2) / double(n - 1)) / (2.0 * mass) - 1.0;
    };
    if (bracket(y0) < 0.0)
        throw std::runtime_error(
            "ode_comparison: negative bracket at the initial datum (threshold/initial constants "
            "mismatch)");
    const double k_n = 2.0 * mass_normalization(n) / (3.0 * std::sqrt(3.0));
    auto rhs = [&](double, double y) {
        return k_n * mass * std::pow(std::max(bracket(y), 0.0), 1.5);
    };
    res.Y = rk4(rhs, y0, res.h_o, top, steps);

    for (int k = 0; k <= ladder; ++k) {
        const double h = res.h_o + (top - res.h_o) * double(k) / double(ladder);
        const double v = detail::level_area(fld, h);
        if (v <= 0.0) continue;
        ++res.checked;
        const double y = res.Y.eval(h);
        const double tol = 1e-6 * v + 5e-3 * v;  // quadrature slack on V
        if (y > v + tol) {
            ++res.violations;
            res.worst_excess = std::max(res.worst_excess, (y - v) / v);
        }
    }
    return res;
}

// ---- height and volume estimates -----------------------------------------

struct HeightEstimate {
    double h_o = 0.0;
    double gap = 0.0;         // max f - h_o, >= 0
    double bound_form = 0.0;  // |dU|^{1/4} m^{1/2} (n=3); m^{1/(n-2)}(|log m| + |dU|) (n>=4)
    double ratio = 0.0;       // gap / bound_form; bounded along m -> 0 sweeps
};

inline HeightEstimate height_estimate_check(const ScalarField& fld, double mass, double xi) {
    const int n = fld.dim();
    HeightEstimate r;
    r.h_o = compute_h_o(fld, xi, mass);
    r.gap = fld.max_value() - r.h_o;
    if (r.gap < 0.0 && r.gap > -1e-12 * (1.0 + std::abs(r.h_o))) r.gap = 0.0;
    if (r.gap < 0.0) throw std::logic_error("height estimate: negative gap");
    const double boundary = fld.domain.boundary_area();
    r.bound_form = n == 3 ? std::pow(boundary, 0.25) * std::sqrt(mass)
                          : std::pow(mass, 1.0 / (n - 2)) *
                                (std::abs(std::log(mass)) + boundary);
    r.ratio = r.bound_form > 0.0 ? r.gap / r.bound_form : 0.0;
    return r;
}

struct VolumeEstimate {
    double vol_graph = 0.0;      // int sqrt(1+|Df|^2) dV_delta over U \ U_o
    double vol_domain = 0.0;     // vol(U \ U_o)
    double excess = 0.0;         // vol_graph - vol_domain
    double v_minus = 0.0;        // graph volume over {f < h_o}
    double v_plus = 0.0;         // graph volume over {f >= h_o}
    double explicit_bound = 0.0;    // proof-explicit upper bound on vol_graph
    bool bound_dominates = false;
};

/// Graph-volume estimate with the proof-explicit upper bound
///   vol(U) + C_n^{-1} T^{n/(n-1)} + (h_o - min f) T + |dU| (max f - h_o),
/// T the threshold area; all constants explicit.
inline VolumeEstimate volume_estimate_check(const ScalarField& fld, double mass, double xi) {
    const int n = fld.dim();
    VolumeEstimate r;
    const double h_o = compute_h_o(fld, xi, mass);

    if (fld.radial) {
        const auto& rp = *fld.radial;
        const double w = unit_sphere_area(n);
        auto dens = [&](double rr) {
            const double fp = rp.df(rr);
            return w * std::pow(rr, n - 1) * std::sqrt(1.0 + fp * fp);
        };
        r.vol_graph = rp.sqrt_singular_at_rmin
                          ? integrate_sqrt_singular_lo(dens, rp.r_min, rp.r_max)
                          : integrate(dens, rp.r_min, rp.r_max, 1e-10);
        if (rp.monotone) {
            const double r_o = rp.radius_of_height(h_o);
            const double a = rp.r_min, b = rp.r_max;
            double below;  // graph volume over {f < h_o}
            if (rp.increasing) {
                below = rp.sqrt_singular_at_rmin ? integrate_sqrt_singular_lo(dens, a, r_o)
                                                 : integrate(dens, a, r_o, 1e-10);
            } else {
                below = integrate(dens, r_o, b, 1e-10);
            }
            r.v_minus = below;
            r.v_plus = r.vol_graph - below;
        } else {
            r.v_minus = 0.0;
            r.v_plus = r.vol_graph;
        }
    } else {
        auto dens = [&](const Vec& x) {
            const Vec g = fld.gradient_at(x);
            return std::sqrt(1.0 + g.dot(g));
        };
        r.vol_graph = fld.volume_integral(dens);
        r.v_minus = fld.volume_integral(dens, RegionSelect::sublevel, h_o);
        r.v_plus = r.vol_graph - r.v_minus;
    }

    r.vol_domain = fld.domain.volume() - fld.domain.inner_volume();
    r.excess = r.vol_graph - r.vol_domain;

    const double t_area = threshold_area(n, xi, mass);
    r.explicit_bound = r.vol_domain +
                    std::pow(t_area, double(n) / double(n - 1)) / isoperimetric_constant(n) +
                    (h_o - fld.min_value()) * t_area +
                    fld.domain.boundary_area() * (fld.max_value() - h_o);
    r.bound_dominates = r.vol_graph <= r.explicit_bound * (1.0 + 1e-9);
    return r;
}

/// Full report for one graph.
struct StabilityReport {
    double xi = 1.0;
    double mass = 0.0;
    double h_o = 0.0;
    double threshold = 0.0;
    OdeComparison ode;
    HeightEstimate height;
    VolumeEstimate volume;
};

inline StabilityReport stability_report(const ScalarField& fld, double mass, double xi) {
    StabilityReport rep;
    rep.xi = xi;
    rep.mass = mass;
    rep.threshold = threshold_area(fld.dim(), xi, mass);
    rep.h_o = compute_h_o(fld, xi, mass);
    rep.ode = ode_comparison(fld, mass, xi);
    rep.height = height_estimate_check(fld, mass, xi);
    rep.volume = volume_estimate_check(fld, mass, xi);
    return rep;
}

}  // namespace qlm
