#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qlm/constants.hpp"
#include "qlm/level_set.hpp"
#include "qlm/quadrature.hpp"

namespace qlm {

/// Quasi-local mass of a slice: (1/((n-1) w_{n-1})) int (Hdeg - H).
/// Normalized so the Schwarzschild boundary slice gives r^{n-2}(1 - 1/sqrt(W)).
inline double brown_york_mass(const LevelSet& ls, int n, size_t* non_convex_facets = nullptr) {
    if (non_convex_facets) *non_convex_facets = 0;
    double s = 0.0;
    for (const auto& fc : ls.facets) {
        if (fc.H_deg <= 0.0 && non_convex_facets) ++*non_convex_facets;
        s += (fc.H_deg - fc.H) * fc.area;
    }
    return s / ((n - 1) * unit_sphere_area(n));
}

/// Bulk flux functional of a slice: (1/c_n) int (|Df|^2/(1+|Df|^2)) Hdeg.
/// Conserved across heights exactly when the graph is scalar-flat.
inline double lam_functional(const LevelSet& ls, int n, size_t* excluded_facets = nullptr) {
    if (excluded_facets) *excluded_facets = 0;
    double s = 0.0;
    for (const auto& fc : ls.facets) {
        if (fc.H_deg <= 0.0 && excluded_facets) ++*excluded_facets;
        const double g2 = fc.grad_norm * fc.grad_norm;
        const double w = std::isfinite(g2) ? g2 / (1.0 + g2) : 1.0;
        s += w * fc.H_deg * fc.area;
    }
    return s / mass_normalization(n);
}

/// Max facet discrepancy of the algebraic integrand identity
///   (|Df|^2/(1+|Df|^2)) Hdeg == Hdeg (1 - H^2/Hdeg^2).
inline double flux_integrand_identity_check(const LevelSet& ls) {
    double scale = 0.0, worst = 0.0;
    for (const auto& fc : ls.facets) scale = std::max(scale, std::abs(fc.H_deg));
    for (const auto& fc : ls.facets) {
        const double g2 = fc.grad_norm * fc.grad_norm;
        const double lhs = (std::isfinite(g2) ? g2 / (1.0 + g2) : 1.0) * fc.H_deg;
        if (std::abs(fc.H_deg) <= 1e-14 * std::max(scale, 1.0)) continue;  // both sides ~ 0
        const double rhs = fc.H_deg * (1.0 - (fc.H * fc.H) / (fc.H_deg * fc.H_deg));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

// ---- radial closed forms -------------------------------------------------

// Both closed forms carry the sign of the slice normal Df/|Df| through Hdeg.
inline double radial_brown_york(const RadialProfile& rp, double r) {
    const double fp = rp.df(r);
    const double w = 1.0 + fp * fp;
    const double sgn = rp.increasing ? 1.0 : -1.0;
    return sgn * std::pow(r, rp.n - 2) * (1.0 - (std::isfinite(w) ? 1.0 / std::sqrt(w) : 0.0));
}

inline double radial_lam(const RadialProfile& rp, double r) {
    const double fp = rp.df(r);
    const double g2 = fp * fp;
    const double w = std::isfinite(g2) ? g2 / (1.0 + g2) : 1.0;
    const double sgn = rp.increasing ? 1.0 : -1.0;
    return sgn * 0.5 * std::pow(r, rp.n - 2) * w;
}

// ---- bulk / boundary conservation ----------------------------------------

struct BulkIdentityResult {
    double L1 = 0.0, L2 = 0.0;
    double boundary_difference = 0.0;  // c_n (L(h2) - L(h1))
    double bulk_integral = 0.0;        // int_{h1 < f < h2} R(f) dV_delta
    double residual = 0.0;             // |bulk - boundary| / scale
    bool monotone_ok = true;           // L(h2) >= L(h1) - tol when min R >= 0
};

/// Conservation law behind the monotonicity of L: the Euclidean bulk integral
/// of R(f) over the band {h1 < f < h2} equals c_n (L(h2) - L(h1)).
/// Note the bulk measure is dV_delta: the divergence identity for the flux
/// (f_i Delta f - f_j f_ij)/(1+|Df|^2) produces R(f) against the flat measure.
inline BulkIdentityResult monotonicity_and_bulk_identity(const ScalarField& fld, double h1,
                                                         double h2) {
    if (!(h1 <= h2)) throw std::invalid_argument("bulk identity: need h1 <= h2");
    const int n = fld.dim();
    const LevelSet s1 = extract_level_set(fld, h1);
    const LevelSet s2 = extract_level_set(fld, h2);
    if (!s1.regular || !s2.regular)
        throw std::domain_error("bulk identity: irregular height rejected");
    BulkIdentityResult res;
    res.L1 = lam_functional(s1, n);
    res.L2 = lam_functional(s2, n);
    res.boundary_difference = mass_normalization(n) * (res.L2 - res.L1);

    double min_r = 0.0;
    if (fld.radial && fld.radial->monotone) {
        const auto& rp = *fld.radial;
        const double ra = rp.radius_of_height(rp.increasing ? h1 : h2);
        const double rb = rp.radius_of_height(rp.increasing ? h2 : h1);
        auto dens = [&](double r) {
            const auto c = radial_curvature(rp, r);
            min_r = std::min(min_r, c.R);
            return c.R * unit_sphere_area(n) * std::pow(r, n - 1);
        };
        res.bulk_integral = rp.sqrt_singular_at_rmin && ra <= rp.r_min * (1.0 + 1e-9)
                                ? integrate_sqrt_singular_lo(dens, ra, rb)
                                : integrate(dens, ra, rb, 1e-10);
    } else {
        min_r = 1e300;
        res.bulk_integral = 0.0;
        // Band = sublevel(h2) minus sublevel(h1), integrated in one pass.
        auto density = [&](const Vec& x) {
            // Boundary-pinched nodes can lack a one-sided FD stencil; they carry
            // negligible measure, so drop them rather than abort the integral.
            try {
                const auto s = curvature_from_derivatives(x, fld.gradient_at(x), fld.hessian_at(x));
                return s.R;
            } catch (const std::domain_error&) {
                return 0.0;
            }
        };
        const double b2 = fld.volume_integral(density, RegionSelect::sublevel, h2);
        const double b1 = fld.volume_integral(density, RegionSelect::sublevel, h1);
        res.bulk_integral = b2 - b1;
        // min R over curvature nodes for the monotonicity assertion.
        detail::for_each_curvature_node(fld, [&](size_t i) {
            try {
                min_r = std::min(min_r, curvature_sample(fld, i).R);
            } catch (const std::domain_error&) {
            }
        });
        if (min_r > 1e200) min_r = 0.0;
    }
    // Normalize by the size of the flux data itself, not just the difference:
    // on scalar-flat profiles both sides are pure roundoff.
    const double scale =
        std::max({std::abs(res.bulk_integral), std::abs(res.boundary_difference),
                  mass_normalization(n) * std::max(std::abs(res.L1), std::abs(res.L2)), 1e-12});
    res.residual = std::abs(res.bulk_integral - res.boundary_difference) / scale;
    const double mono_tol = 1e-6 * std::max(std::abs(res.L1), 1.0) + 0.02 * std::abs(res.L2 - res.L1);
    res.monotone_ok = min_r >= -1e-9 ? (res.L2 >= res.L1 - mono_tol) : true;
    return res;
}

// ---- geometric inequalities ----------------------------------------------

struct MinkowskiResult {
    double total_mean_curvature = 0.0;  // (1/((n-1) w)) int Hdeg
    double area_term = 0.0;             // (|Sigma|/w)^{(n-2)/(n-1)}
    double deficit = 0.0;
};

inline MinkowskiResult minkowski_check(const LevelSet& ls, int n) {
    MinkowskiResult r;
    const double w = unit_sphere_area(n);
    r.total_mean_curvature =
        surface_integral(ls, [](const Facet& fc) { return fc.H_deg; }) / ((n - 1) * w);
    r.area_term = std::pow(ls.area() / w, double(n - 2) / double(n - 1));
    r.deficit = r.total_mean_curvature - r.area_term;
    return r;
}

/// m_BY of the outer boundary slice: closed form for radial profiles, the
/// highest near-boundary ladder level otherwise.
inline double boundary_mass(const ScalarField& fld) {
    if (fld.radial && fld.radial->monotone)
        return radial_brown_york(*fld.radial, fld.radial->r_max);
    const double lo = fld.min_value(), hi = fld.max_value();
    if (!(hi - lo > 1e-13 * (1.0 + std::abs(hi)))) return 0.0;  // flat slab
    const double h = hi - 1e-3 * (hi - lo);
    const LevelSet ls = extract_level_set(fld, h);
    if (ls.empty()) throw std::domain_error("boundary_mass: empty boundary slice");
    return brown_york_mass(ls, fld.dim());
}

struct PenroseResult {
    double boundary_mass = 0.0;  // m_BY of the outer boundary slice
    double horizon_term = 0.0;   // (1/2)(|Sigma_o|/w)^{(n-2)/(n-1)}
    double margin = 0.0;
};

/// Quasi-local horizon lower bound: m_BY(dU slice) > horizon term, strict for
/// admissible graphs with nonempty horizon.
inline PenroseResult penrose_check(const ScalarField& fld) {
    if (!fld.domain.has_horizon())
        throw std::domain_error("penrose_check: no horizon present (U_o empty)");
    const int n = fld.dim();
    PenroseResult r;
    r.boundary_mass = boundary_mass(fld);
    double horizon_area = 0.0;
    for (const auto& comp : fld.domain.inner) horizon_area += comp.boundary_area(n);
    r.horizon_term =
        0.5 * std::pow(horizon_area / unit_sphere_area(n), double(n - 2) / double(n - 1));
    r.margin = r.boundary_mass - r.horizon_term;
    return r;
}

struct AdmLimitResult {
    std::vector<double> radii;
    std::vector<double> mass;   // m_BY of the truncation boundary
    bool monotone_decreasing = true;
    double final_error = 0.0;   // |mass.back() - expected|
};

/// Truncation sequence of boundary masses; for asymptotically flat radial
/// profiles this approaches the total (ADM) mass parameter.
inline AdmLimitResult adm_limit_check(const std::function<std::shared_ptr<const RadialProfile>(double)>& profile_at_radius,
                                      const std::vector<double>& radii, double expected) {
    AdmLimitResult res;
    res.radii = radii;
    for (double r : radii) {
        auto rp = profile_at_radius(r);
        res.mass.push_back(radial_brown_york(*rp, r));
    }
    for (size_t k = 1; k < res.mass.size(); ++k)
        if (res.mass[k] > res.mass[k - 1] + 1e-12) res.monotone_decreasing = false;
    if (!res.mass.empty()) res.final_error = std::abs(res.mass.back() - expected);
    return res;
}

// ---- per-height table ----------------------------------------------------

struct MassRow {
    double h = 0.0;
    double area = 0.0;
    double mass = 0.0;       // m_BY
    double flux = 0.0;       // L
    double minkowski_deficit = 0.0;
    bool regular = false;
};

inline std::vector<MassRow> mass_table(const ScalarField& fld, int ladder = 200) {
    std::vector<MassRow> rows;
    const double lo = fld.min_value(), hi = fld.max_value();
    if (!(hi - lo > 1e-13 * (1.0 + std::abs(hi)))) return rows;
    rows.resize(size_t(ladder));
    parallel_for(size_t(ladder), [&](size_t klo, size_t khi) {
        for (size_t k = klo; k < khi; ++k) {
            MassRow row;
            row.h = lo + (hi - lo) * double(k + 1) / double(ladder + 1);
            const LevelSet ls = extract_level_set(fld, row.h);
            row.area = ls.area();
            row.regular = ls.regular && !ls.empty();
            if (row.regular) {
                row.mass = brown_york_mass(ls, fld.dim());
                row.flux = lam_functional(ls, fld.dim());
                row.minkowski_deficit = minkowski_check(ls, fld.dim()).deficit;
            }
            rows[k] = row;
        }
    }, 1);
    return rows;
}

}  // namespace qlm
