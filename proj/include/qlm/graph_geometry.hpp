#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qlm/field.hpp"
#include "qlm/parallel.hpp"

namespace qlm {

/// Pointwise curvature data of graph[f] in R^{n+1}.
/// Convention: the unit normal points downward, so Hhat = +tr_g(Hess f / sqrt(W))
/// with W = 1 + |Df|^2; a convex bump opening downward has Hhat > 0.
struct GraphCurvatureSample {
    Vec x;
    SymMat g;        // induced metric, delta + df (x) df
    SymMat pi;       // second fundamental form, Hess f / sqrt(W)
    double H_hat = 0.0;
    double pi_norm_sq = 0.0;  // |pi|^2_g
    double R = 0.0;           // = H_hat^2 - pi_norm_sq (Gauss)
    double max_sectional = 0.0;
};

inline GraphCurvatureSample curvature_from_derivatives(const Vec& x, const Vec& grad,
                                                       const SymMat& hess) {
    const int n = x.n;
    GraphCurvatureSample s;
    s.x = x;
    const double w = 1.0 + grad.dot(grad);
    const double sw = std::sqrt(w);

    s.g = SymMat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.g.at(i, j) += grad[i] * grad[j];

    s.pi = SymMat(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.pi.at(i, j) = hess.at(i, j) / sw;

    // g^{ij} = delta^{ij} - f^i f^j / W
    SymMat ginv = SymMat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ginv.at(i, j) -= grad[i] * grad[j] / w;

    double tr = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += ginv.at(i, j) * s.pi.at(i, j);
    s.H_hat = tr;

    // |pi|^2_g = g^{ik} g^{jl} pi_{ij} pi_{kl}; assemble A = ginv * pi first.
    double nsq = 0.0;
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            double a_il = 0.0;
            for (int k = 0; k < n; ++k) a_il += ginv.at(i, k) * s.pi.at(k, l);
            double b_li = 0.0;
            for (int j = 0; j < n; ++j) b_li += ginv.at(l, j) * s.pi.at(j, i);
            nsq += a_il * b_li;
        }
    s.pi_norm_sq = nsq;
    s.R = s.H_hat * s.H_hat - s.pi_norm_sq;

    // Principal curvatures: eigenvalues of g^{-1/2} pi g^{-1/2}, using the
    // rank-one structure g = I + Df (x) Df.
    SymMat b(n);
    const double gn = grad.norm();
    if (gn < 1e-300) {
        b = s.pi;
    } else {
        Vec u(n);
        for (int i = 0; i < n; ++i) u[i] = grad[i] / gn;
        const double c = 1.0 / sw - 1.0;
        auto half = [&](int i, int j) { return (i == j ? 1.0 : 0.0) + c * u[i] * u[j]; };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = 0.0;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) v += half(i, k) * s.pi.at(k, l) * half(l, j);
                b.at(i, j) = v;
            }
    }
    const auto kappa = sym_eigenvalues(b);
    double sec = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) sec = std::max(sec, kappa[size_t(i)] * kappa[size_t(j)]);
    s.max_sectional = sec;
    return s;
}

namespace detail {
inline void require_off_horizon(const ScalarField& fld, size_t node) {
    if (fld.node_class(node) == NodeClass::near_inner)
        throw std::domain_error("curvature: node inside the horizon collar, |Df| unbounded");
}
}  // namespace detail

inline GraphCurvatureSample curvature_sample(const ScalarField& fld, size_t node) {
    detail::require_off_horizon(fld, node);
    return curvature_from_derivatives(fld.node_point(node), fld.gradient(node), fld.hessian(node));
}

inline SymMat second_fundamental_form(const ScalarField& fld, size_t node) {
    return curvature_sample(fld, node).pi;
}
inline double graph_mean_curvature(const ScalarField& fld, size_t node) {
    return curvature_sample(fld, node).H_hat;
}
inline double scalar_curvature(const ScalarField& fld, size_t node) {
    return curvature_sample(fld, node).R;
}

// ---- radial closed forms -------------------------------------------------

struct RadialCurvature {
    double kappa_rad = 0.0;  // f'' / W^{3/2}
    double kappa_tan = 0.0;  // f' / (r sqrt(W))
    double H_hat = 0.0;
    double R = 0.0;
    double max_sectional = 0.0;
};

inline RadialCurvature radial_curvature(const RadialProfile& rp, double r) {
    const int n = rp.n;
    const double fp = rp.df(r), fpp = rp.ddf(r);
    const double w = 1.0 + fp * fp;
    RadialCurvature c;
    c.kappa_rad = fpp / std::pow(w, 1.5);
    c.kappa_tan = r > 1e-300 ? fp / (r * std::sqrt(w)) : c.kappa_rad;
    c.H_hat = c.kappa_rad + (n - 1) * c.kappa_tan;
    c.R = 2.0 * (n - 1) * c.kappa_rad * c.kappa_tan +
          double(n - 1) * (n - 2) * c.kappa_tan * c.kappa_tan;
    c.max_sectional = std::max(c.kappa_rad * c.kappa_tan, c.kappa_tan * c.kappa_tan);
    if (n == 2) c.max_sectional = c.kappa_rad * c.kappa_tan;
    return c;
}

// ---- verdicts and reports ------------------------------------------------

enum class Verdict { pass, fail, unverifiable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "unverifiable";
    }
}

struct AdmissibilityReport {
    double min_scalar_curvature = 0.0;
    Verdict curvature_verdict = Verdict::unverifiable;       // R >= 0 up to tolerance
    double mean_convex_fraction = 0.0;                       // sampled level sets with min Hdeg > 0
    Verdict mean_convex_verdict = Verdict::unverifiable;
    Verdict outer_minimizing_verdict = Verdict::unverifiable;
    std::vector<double> horizon_oscillation;                 // per inner component
    Verdict locally_constant_verdict = Verdict::pass;        // trivially pass when U_o empty
    size_t samples = 0;
    bool admissible() const {
        return curvature_verdict == Verdict::pass && mean_convex_verdict == Verdict::pass &&
               outer_minimizing_verdict != Verdict::fail &&
               locally_constant_verdict == Verdict::pass;
    }
};

enum class SignVerdict { single_signed_positive, single_signed_negative, degenerate_zero, mixed };

inline const char* to_string(SignVerdict v) {
    switch (v) {
        case SignVerdict::single_signed_positive: return "single-signed-positive";
        case SignVerdict::single_signed_negative: return "single-signed-negative";
        case SignVerdict::degenerate_zero: return "degenerate-zero";
        default: return "mixed";
    }
}

struct SignReport {
    size_t positive = 0, negative = 0, zero = 0;
    double min_H = 0.0, max_H = 0.0;
    SignVerdict verdict = SignVerdict::degenerate_zero;
};

struct BallCriterionReport {
    double sectional_bound = 0.0;  // C = sqrt(max sectional, clamped at 0)
    double mass = 0.0;
    double threshold = 0.0;        // 1 / (2C), +inf when flat
    bool trivially_flat = false;
    Verdict verdict = Verdict::unverifiable;
};

namespace detail {

/// Nodes where FD curvature is meaningful: inside the mask, off the horizon collar.
template <class Fn>
void for_each_curvature_node(const ScalarField& fld, Fn&& fn) {
    for (size_t i = 0; i < fld.node_count(); ++i) {
        const NodeClass c = fld.node_class(i);
        if (c == NodeClass::outside || c == NodeClass::near_inner) continue;
        fn(i);
    }
}

}  // namespace detail

/// Definition-style admissibility scan: R >= 0, mean-convex level sets,
/// f locally constant on the horizon components. "Outer-minimizing" is only
/// certified through the sufficient radial-monotone condition.
inline AdmissibilityReport check_admissibility(const ScalarField& fld, int height_bins = 64) {
    AdmissibilityReport rep;
    const int n = fld.dim();

    double min_r = 1e300, max_curv_scale = 0.0;
    std::vector<GraphCurvatureSample> samples;
    std::vector<double> heights, grads;
    detail::for_each_curvature_node(fld, [&](size_t i) {
        auto s = curvature_from_derivatives(fld.node_point(i), fld.gradient(i), fld.hessian(i));
        min_r = std::min(min_r, s.R);
        samples.push_back(s);
        heights.push_back(fld.value(i));
        grads.push_back(fld.gradient(i).norm());
        max_curv_scale = std::max(max_curv_scale, std::abs(s.H_hat));
        rep.samples++;
    });
    if (samples.empty()) {
        rep.curvature_verdict = Verdict::unverifiable;
        rep.mean_convex_verdict = Verdict::unverifiable;
        return rep;
    }
    rep.min_scalar_curvature = min_r;
    const double r_tol = 1e-6 * std::max(1.0, max_curv_scale * max_curv_scale);
    rep.curvature_verdict = min_r >= -r_tol ? Verdict::pass : Verdict::fail;

    // Mean convexity of sampled level sets: each valued node lies on the level
    // set through it; bucket by height and take the min of Hdeg per bucket.
    double gmax = 0.0;
    for (double g : grads) gmax = std::max(gmax, g);
    const double eps_reg = 1e-8 * std::max(gmax, 1.0);
    const double h_lo = fld.min_value(), h_hi = fld.max_value();
    if (h_hi - h_lo < 1e-14 * (1.0 + std::abs(h_hi))) {
        // Constant graph: no level sets in the open range; trivially convex.
        rep.mean_convex_fraction = 1.0;
        rep.mean_convex_verdict = Verdict::pass;
    } else {
        std::vector<double> bucket_min(size_t(height_bins), 1e300);
        std::vector<bool> bucket_used(size_t(height_bins), false);
        for (size_t k = 0; k < samples.size(); ++k) {
            if (grads[k] <= eps_reg) continue;
            const auto& s = samples[k];
            // Hdeg = Delta f / |Df| - Hess(Df,Df)/|Df|^3 from the stored pi.
            const Vec df = fld.gradient_at(s.x);
            const double gn = df.norm();
            if (gn <= eps_reg) continue;
            const double sw = std::sqrt(1.0 + gn * gn);
            double lap = 0.0, quad = 0.0;
            for (int i = 0; i < n; ++i) lap += s.pi.at(i, i) * sw;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) quad += s.pi.at(i, j) * sw * df[i] * df[j];
            const double hdeg = lap / gn - quad / (gn * gn * gn);
            int b = int((heights[k] - h_lo) / (h_hi - h_lo) * height_bins);
            b = std::clamp(b, 0, height_bins - 1);
            bucket_used[size_t(b)] = true;
            bucket_min[size_t(b)] = std::min(bucket_min[size_t(b)], hdeg);
        }
        size_t used = 0, convex = 0;
        for (int b = 0; b < height_bins; ++b) {
            if (!bucket_used[size_t(b)]) continue;
            ++used;
            if (bucket_min[size_t(b)] > 0.0) ++convex;
        }
        rep.mean_convex_fraction = used ? double(convex) / double(used) : 1.0;
        rep.mean_convex_verdict = used == 0            ? Verdict::unverifiable
                                  : rep.mean_convex_fraction >= 1.0 ? Verdict::pass
                                                                    : Verdict::fail;
    }

    // Outer-minimizing: sufficient condition only.
    if (fld.radial && fld.radial->monotone)
        rep.outer_minimizing_verdict = Verdict::pass;
    else
        rep.outer_minimizing_verdict = Verdict::unverifiable;

    // Local constancy on each horizon component: oscillation of f sampled on
    // the component boundary itself (radial profiles carry the exact value).
    const size_t ncomp = fld.domain.inner.size();
    if (ncomp > 0) {
        rep.locally_constant_verdict = Verdict::pass;
        if (fld.radial && fld.radial->has_horizon) {
            rep.horizon_oscillation.assign(ncomp, 0.0);
        } else {
            const double osc_tol = 0.05 * std::max(1e-300, fld.max_value() - fld.min_value());
            for (size_t c = 0; c < ncomp; ++c) {
                const Region& comp = fld.domain.inner[c];
                if (comp.kind != RegionKind::ball) {
                    rep.horizon_oscillation.push_back(0.0);
                    rep.locally_constant_verdict = Verdict::unverifiable;
                    continue;
                }
                double lo = 1e300, hi = -1e300;
                size_t got = 0, tried = 0;
                // Deterministic direction set: axis points plus diagonal corners.
                std::vector<Vec> dirs;
                for (int d = 0; d < n; ++d)
                    for (int sgn : {-1, 1}) {
                        Vec u(n);
                        u[d] = double(sgn);
                        dirs.push_back(u);
                    }
                for (int corner = 0; corner < (1 << n); ++corner) {
                    Vec u(n);
                    for (int d = 0; d < n; ++d) u[d] = ((corner >> d) & 1) ? 1.0 : -1.0;
                    dirs.push_back(u * (1.0 / u.norm()));
                }
                for (const auto& u : dirs) {
                    ++tried;
                    try {
                        const double v = fld.value_at(comp.center + u * comp.radius);
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                        ++got;
                    } catch (const std::domain_error&) {
                    }
                }
                const double osc = got ? hi - lo : 0.0;
                rep.horizon_oscillation.push_back(osc);
                if (got * 2 < tried)
                    rep.locally_constant_verdict = Verdict::unverifiable;
                else if (osc > osc_tol)
                    rep.locally_constant_verdict = Verdict::fail;
            }
        }
    }
    return rep;
}

/// Sign scan of the graph mean curvature over curvature nodes.
inline SignReport mean_curvature_sign_check(const ScalarField& fld) {
    SignReport rep;
    double lo = 1e300, hi = -1e300, scale = 0.0;
    std::vector<double> vals;
    detail::for_each_curvature_node(fld, [&](size_t i) {
        const double h = graph_mean_curvature(fld, i);
        vals.push_back(h);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
        scale = std::max(scale, std::abs(h));
    });
    if (vals.empty()) return rep;
    const double tol = 1e-9 * std::max(scale, 1e-30);
    for (double h : vals) {
        if (h > tol) rep.positive++;
        else if (h < -tol) rep.negative++;
        else rep.zero++;
    }
    rep.min_H = lo;
    rep.max_H = hi;
    if (rep.positive == 0 && rep.negative == 0)
        rep.verdict = SignVerdict::degenerate_zero;
    else if (rep.negative == 0)
        rep.verdict = SignVerdict::single_signed_positive;
    else if (rep.positive == 0)
        rep.verdict = SignVerdict::single_signed_negative;
    else
        rep.verdict = lo * hi >= -tol * std::max(scale, 1e-30) ? SignVerdict::single_signed_positive
                                                               : SignVerdict::mixed;
    return rep;
}

/// No-closed-minimal-surface criterion (n = 3): mass below 1/(2C) where C
/// bounds sqrt(sectional curvature) from principal-curvature products.
inline BallCriterionReport ball_criterion(const ScalarField& fld, double mass) {
    if (fld.dim() != 3)
        throw std::invalid_argument("ball_criterion: only defined for three-dimensional slices");
    BallCriterionReport rep;
    rep.mass = mass;
    double max_sec = 0.0;
    if (fld.radial) {
        const auto& rp = *fld.radial;
        const int steps = 2000;
        const double eps = rp.sqrt_singular_at_rmin ? 1e-6 * (rp.r_max - rp.r_min) : 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double r = rp.r_min + eps + (rp.r_max - rp.r_min - eps) * double(i) / steps;
            max_sec = std::max(max_sec, radial_curvature(rp, r).max_sectional);
        }
    } else {
        detail::for_each_curvature_node(fld, [&](size_t i) {
            max_sec = std::max(max_sec, curvature_sample(fld, i).max_sectional);
        });
    }
    rep.sectional_bound = std::sqrt(std::max(max_sec, 0.0));
    if (rep.sectional_bound <= 0.0) {
        rep.trivially_flat = true;
        rep.threshold = std::numeric_limits<double>::infinity();
        rep.verdict = Verdict::pass;
        return rep;
    }
    rep.threshold = 1.0 / (2.0 * rep.sectional_bound);
    rep.verdict = mass < rep.threshold ? Verdict::pass : Verdict::fail;
    return rep;
}

}  // namespace qlm
