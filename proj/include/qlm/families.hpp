#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "qlm/field.hpp"
#include "qlm/quadrature.hpp"

namespace qlm {

/// Analytic example families.
struct FamilySpec {
    enum class Kind { schwarzschild, bump, gravity_well, constant };
    Kind kind = Kind::schwarzschild;
    int n = 3;
    double mass = 1.0;         // schwarzschild
    double amplitude = 1.0;    // bump
    double width = 0.25;       // gravity well
    double depth = 1.0;        // gravity well
    double constant = 0.0;     // constant graph
    double outer_radius = 4.0; // radius of the ball U
    bool admissible_expected = true;

    void check() const {
        if (n < 2 || n > kMaxDim) throw std::invalid_argument("FamilySpec: dimension out of range");
        if (outer_radius <= 0.0) throw std::invalid_argument("FamilySpec: outer radius must be positive");
        if (kind == Kind::schwarzschild) {
            if (mass < 0.0) throw std::invalid_argument("FamilySpec: negative mass");
            if (mass > 0.0 && outer_radius <= horizon_radius())
                throw std::invalid_argument("FamilySpec: horizon lies outside U");
        }
        if (kind == Kind::gravity_well && (width <= 0.0 || width >= outer_radius || depth < 0.0))
            throw std::invalid_argument("FamilySpec: bad well parameters");
    }

    double horizon_radius() const {
        return (kind == Kind::schwarzschild && mass > 0.0) ? std::pow(2.0 * mass, 1.0 / (n - 2)) : 0.0;
    }
};

namespace detail {

/// Cumulative integral F(u) = int_0^u g, tabulated once and interpolated with
/// cubic Hermite segments (the integrand supplies exact slopes).
class CumulativeIntegral {
  public:
    CumulativeIntegral(std::function<double(double)> g, double u_max, int panels = 4096)
        : g_(std::move(g)), umax_(u_max) {
        table_.resize(size_t(panels) + 1, 0.0);
        du_ = u_max / panels;
        double acc = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double a = i * du_, b = (i + 1) * du_, m = 0.5 * (a + b);
            acc += du_ / 6.0 * (g_(a) + 4.0 * g_(m) + g_(b));
            table_[size_t(i) + 1] = acc;
        }
    }
    double operator()(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= umax_) return table_.back();
        const double t = u / du_;
        const size_t i = std::min(size_t(t), table_.size() - 2);
        const double s = t - double(i);
        const double y0 = table_[i], y1 = table_[i + 1];
        const double d0 = g_(double(i) * du_) * du_, d1 = g_(double(i + 1) * du_) * du_;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 +
               (s3 - s2) * d1;
    }

  private:
    std::function<double(double)> g_;
    double umax_, du_ = 1.0;
    std::vector<double> table_;
};

inline double bump_shape(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }
inline double bump_shape_d1(double s) {
    if (s >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return bump_shape(s) * (-2.0 * s / (q * q));
}
inline double bump_shape_d2(double s) {
    if (s >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    const double qp = -2.0 * s / (q * q);
    const double qpp = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
    return bump_shape(s) * (qp * qp + qpp);
}

}  // namespace detail

/// Closed-form radial profile for one family instance.
inline std::shared_ptr<const RadialProfile> make_radial_profile(const FamilySpec& spec) {
    spec.check();
    auto rp = std::make_shared<RadialProfile>();
    rp->n = spec.n;
    rp->r_max = spec.outer_radius;
    switch (spec.kind) {
        case FamilySpec::Kind::constant: {
            const double c = spec.constant;
            rp->monotone = false;
            rp->f = [c](double) { return c; };
            rp->df = [](double) { return 0.0; };
            rp->ddf = [](double) { return 0.0; };
            break;
        }
        case FamilySpec::Kind::schwarzschild: {
            const int n = spec.n;
            const double m = spec.mass;
            if (m == 0.0) {
                rp->monotone = false;
                rp->f = [](double) { return 0.0; };
                rp->df = [](double) { return 0.0; };
                rp->ddf = [](double) { return 0.0; };
                break;
            }
            const double rh = spec.horizon_radius();
            rp->r_min = rh;
            rp->has_horizon = true;
            rp->sqrt_singular_at_rmin = true;
            rp->increasing = true;
            // f'(r)^2 = (2m / r^{n-2}) / (1 - 2m / r^{n-2})
            auto df = [n, m, rh](double r) {
                r = std::max(r, rh * (1.0 + 1e-15));
                const double p = std::pow(r, n - 2);
                return std::sqrt(2.0 * m / std::max(p - 2.0 * m, 1e-300));
            };
            rp->df = df;
            rp->ddf = [n, m, rh](double r) {
                r = std::max(r, rh * (1.0 + 1e-15));
                const double p = std::pow(r, n - 2);
                return -(n - 2) * std::pow(r, n - 3) * std::sqrt(2.0 * m) /
                       (2.0 * std::pow(std::max(p - 2.0 * m, 1e-300), 1.5));
            };
            if (n == 3) {
                rp->f = [m](double r) { return std::sqrt(std::max(8.0 * m * (r - 2.0 * m), 0.0)); };
            } else {
                // Height from the horizon by quadrature in u = sqrt(r - rh).
                const double umax = std::sqrt(spec.outer_radius - rh);
                auto integrand = [df, rh](double u) { return df(rh + u * u) * 2.0 * u; };
                auto table = std::make_shared<detail::CumulativeIntegral>(integrand, umax);
                rp->f = [table, rh](double r) {
                    return r <= rh ? 0.0 : (*table)(std::sqrt(r - rh));
                };
            }
            break;
        }
        case FamilySpec::Kind::bump: {
            const double a = spec.amplitude, R = spec.outer_radius;
            rp->monotone = true;
            rp->increasing = false;
            rp->f = [a, R](double r) { return a * detail::bump_shape(r / R); };
            rp->df = [a, R](double r) { return a / R * detail::bump_shape_d1(r / R); };
            rp->ddf = [a, R](double r) { return a / (R * R) * detail::bump_shape_d2(r / R); };
            break;
        }
        case FamilySpec::Kind::gravity_well: {
            // C^2 radial plug: f = -d (1 - (r/w)^2)^3 inside the well, 0 outside.
            const double d = spec.depth, w = spec.width;
            rp->monotone = true;
            rp->increasing = true;
            rp->f = [d, w](double r) {
                const double s = r / w;
                return s < 1.0 ? -d * std::pow(1.0 - s * s, 3) : 0.0;
            };
            rp->df = [d, w](double r) {
                const double s = r / w;
                return s < 1.0 ? d * 6.0 * s * std::pow(1.0 - s * s, 2) / w : 0.0;
            };
            rp->ddf = [d, w](double r) {
                const double s = r / w;
                if (s >= 1.0) return 0.0;
                const double q = 1.0 - s * s;
                return d * (6.0 * q * q - 24.0 * s * s * q) / (w * w);
            };
            break;
        }
    }
    return rp;
}

/// Build the field (analytic profile attached) for a family on a grid.
inline ScalarField instantiate(const FamilySpec& spec, const GridSpec& grid, double grad_cap = 1e6) {
    spec.check();
    auto rp = make_radial_profile(spec);
    std::vector<Region> inner;
    if (spec.kind == FamilySpec::Kind::schwarzschild && spec.mass > 0.0)
        inner.push_back(Region::make_ball(Vec(spec.n), spec.horizon_radius()));
    Domain dom(spec.n, Region::make_ball(Vec(spec.n), spec.outer_radius), std::move(inner));
    return ScalarField::build(std::move(dom), grid, radial_to_analytic(rp), rp, grad_cap);
}

}  // namespace qlm
