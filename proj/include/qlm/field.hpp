#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qlm/domain.hpp"
#include "qlm/linalg.hpp"
#include "qlm/parallel.hpp"
#include "qlm/quadrature.hpp"

namespace qlm {

struct GridSpec {
    std::array<int, kMaxDim> res{};
    enum class Boundary { one_sided, clamped } boundary = Boundary::one_sided;

    static GridSpec uniform(int n, int r) {
        GridSpec g;
        for (int i = 0; i < n; ++i) g.res[size_t(i)] = r;
        return g;
    }
    void check(int n) const {
        for (int i = 0; i < n; ++i)
            if (res[size_t(i)] < 8) throw std::invalid_argument("GridSpec: resolution must be >= 8 per axis");
    }
};

enum class NodeClass : uint8_t { outside = 0, interior = 1, near_outer = 2, near_inner = 3 };

/// Exact profile data: f with closed-form first and second derivatives.
struct AnalyticProfile {
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> grad;
    std::function<SymMat(const Vec&)> hess;
};

/// Rotationally symmetric profile about the origin with exact radial
/// derivatives. Used by the closed-form families; enables 1-D quadrature
/// across the horizon collar where |Df| blows up.
struct RadialProfile {
    int n = 3;
    double r_min = 0.0;   // horizon radius when has_horizon, else 0
    double r_max = 1.0;   // outer radius of U
    bool has_horizon = false;
    bool sqrt_singular_at_rmin = false;  // f' ~ (r - r_min)^{-1/2}
    bool monotone = true;                // f strictly monotone in r on (r_min, r_max)
    bool increasing = true;              // direction when monotone
    std::function<double(double)> f, df, ddf;

    double f_min() const { return monotone ? (increasing ? f(r_min) : f(r_max)) : f(r_max); }
    double f_max() const { return monotone ? (increasing ? f(r_max) : f(r_min)) : f(r_min); }

    /// Invert the monotone branch: radius of the level set {f = h}.
    double radius_of_height(double h) const {
        if (!monotone) throw std::runtime_error("RadialProfile: non-monotone profile has no inverse");
        double lo = r_min, hi = r_max;
        const double flo = f(lo), fhi = f(hi);
        const double a = std::min(flo, fhi), b = std::max(flo, fhi);
        if (h < a - 1e-12 || h > b + 1e-12)
            throw std::domain_error("RadialProfile: height outside the profile range");
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const bool below = increasing ? (f(mid) < h) : (f(mid) > h);
            (below ? lo : hi) = mid;
            if (hi - lo < 1e-14 * (1.0 + r_max)) break;
        }
        return 0.5 * (lo + hi);
    }
};

inline AnalyticProfile radial_to_analytic(const std::shared_ptr<const RadialProfile>& rp) {
    AnalyticProfile p;
    p.f = [rp](const Vec& x) { return rp->f(x.norm()); };
    p.grad = [rp](const Vec& x) {
        const double r = x.norm();
        Vec g(x.n);
        if (r < 1e-14) return g;
        const double d = rp->df(r);
        for (int i = 0; i < x.n; ++i) g[i] = d * x[i] / r;
        return g;
    };
    p.hess = [rp](const Vec& x) {
        const double r = x.norm();
        SymMat hmat(x.n);
        if (r < 1e-14) {
            const double c = rp->ddf(std::max(r, 1e-14));
            for (int i = 0; i < x.n; ++i) hmat.at(i, i) = c;
            return hmat;
        }
        const double fr = rp->df(r), frr = rp->ddf(r);
        for (int i = 0; i < x.n; ++i)
            for (int j = 0; j < x.n; ++j) {
                const double xi = x[i] / r, xj = x[j] / r;
                hmat.at(i, j) = frr * xi * xj + fr / r * ((i == j ? 1.0 : 0.0) - xi * xj);
            }
        return hmat;
    };
    return p;
}

enum class RegionSelect { whole, sublevel, superlevel };

/// Sampled (or analytic) graph function over closure(U) \ U_o on a uniform
/// cell-centered Cartesian grid. Immutable after construction.
class ScalarField {
  public:
    Domain domain;
    GridSpec grid;
    std::optional<AnalyticProfile> profile;
    std::shared_ptr<const RadialProfile> radial;  // null unless rotationally symmetric
    double grad_cap = 1e6;

    ScalarField() = default;

    /// Sample a profile on the grid and classify nodes.
    static ScalarField build(Domain dom, GridSpec gs, AnalyticProfile prof,
                             std::shared_ptr<const RadialProfile> rad = nullptr,
                             double cap = 1e6) {
        gs.check(dom.n);
        ScalarField fld;
        fld.domain = std::move(dom);
        fld.grid = gs;
        fld.profile = std::move(prof);
        fld.radial = std::move(rad);
        fld.grad_cap = cap;
        fld.init_geometry();
        fld.sample_and_classify();
        return fld;
    }

    /// Build from raw node values (no analytic data); mask from the domain only.
    static ScalarField build_sampled(Domain dom, GridSpec gs, std::vector<double> vals,
                                     double cap = 1e6) {
        gs.check(dom.n);
        ScalarField fld;
        fld.domain = std::move(dom);
        fld.grid = gs;
        fld.grad_cap = cap;
        fld.init_geometry();
        if (vals.size() != fld.total_nodes_)
            throw std::invalid_argument("ScalarField: value array size mismatch");
        fld.values_ = std::move(vals);
        fld.classify_nodes(nullptr);
        fld.finalize_range();
        return fld;
    }

    int dim() const { return domain.n; }
    size_t node_count() const { return total_nodes_; }
    double spacing(int axis) const { return h_[size_t(axis)]; }
    double max_spacing() const {
        double m = 0;
        for (int i = 0; i < dim(); ++i) m = std::max(m, spacing(i));
        return m;
    }
    double voxel_volume() const {
        double v = 1.0;
        for (int i = 0; i < dim(); ++i) v *= spacing(i);
        return v;
    }
    double min_value() const { return fmin_; }
    double max_value() const { return fmax_; }

    NodeClass node_class(size_t flat) const { return mask_[flat]; }
    bool has_value(size_t flat) const { return mask_[flat] != NodeClass::outside; }
    double value(size_t flat) const { return values_[flat]; }

    Vec node_point(size_t flat) const {
        Vec x(dim());
        size_t rem = flat;
        for (int d = dim() - 1; d >= 0; --d) {
            const size_t r = size_t(grid.res[size_t(d)]);
            const size_t idx = rem % r;
            rem /= r;
            x[d] = domain.bbox_lo[d] + (double(idx) + 0.5) * h_[size_t(d)];
        }
        return x;
    }
    std::array<int, kMaxDim> node_index(size_t flat) const {
        std::array<int, kMaxDim> idx{};
        size_t rem = flat;
        for (int d = dim() - 1; d >= 0; --d) {
            const size_t r = size_t(grid.res[size_t(d)]);
            idx[size_t(d)] = int(rem % r);
            rem /= r;
        }
        return idx;
    }
    size_t flat_index(const std::array<int, kMaxDim>& idx) const {
        size_t f = 0;
        for (int d = 0; d < dim(); ++d) f = f * size_t(grid.res[size_t(d)]) + size_t(idx[size_t(d)]);
        return f;
    }
    bool index_valid(const std::array<int, kMaxDim>& idx) const {
        for (int d = 0; d < dim(); ++d)
            if (idx[size_t(d)] < 0 || idx[size_t(d)] >= grid.res[size_t(d)]) return false;
        return true;
    }

    // ---- finite-difference calculus ------------------------------------

    /// Second-order FD gradient at a node (analytic profile used when present).
    Vec gradient(size_t flat) const {
        require_valued(flat, "gradient");
        if (profile) return profile->grad(node_point(flat));
        Vec g(dim());
        for (int d = 0; d < dim(); ++d)
            g[d] = fd_first(flat, d, [this](size_t k) { return values_[k]; });
        return g;
    }

    /// Second-order FD Hessian; mixed partials from the symmetric cross stencil.
    SymMat hessian(size_t flat) const {
        require_valued(flat, "hessian");
        if (profile) return profile->hess(node_point(flat));
        SymMat hmat(dim());
        for (int d = 0; d < dim(); ++d) hmat.at(d, d) = fd_second(flat, d);
        for (int d = 0; d < dim(); ++d)
            for (int e = d + 1; e < dim(); ++e) {
                const double v = fd_mixed(flat, d, e);
                hmat.at(d, e) = v;
                hmat.at(e, d) = v;
            }
        return hmat;
    }

    double value_at(const Vec& x) const {
        if (profile) return profile->f(x);
        return interpolate(x, [this](size_t k) { return values_[k]; });
    }
    Vec gradient_at(const Vec& x) const {
        if (profile) return profile->grad(x);
        Vec g(dim());
        for (int d = 0; d < dim(); ++d)
            g[d] = interpolate(x, [this, d](size_t k) {
                return fd_first(k, d, [this](size_t j) { return values_[j]; });
            });
        return g;
    }
    SymMat hessian_at(const Vec& x) const {
        if (profile) return profile->hess(x);
        SymMat hmat(dim());
        for (int d = 0; d < dim(); ++d)
            hmat.at(d, d) = interpolate(x, [this, d](size_t k) { return fd_second(k, d); });
        for (int d = 0; d < dim(); ++d)
            for (int e = d + 1; e < dim(); ++e) {
                const double v = interpolate(x, [this, d, e](size_t k) { return fd_mixed(k, d, e); });
                hmat.at(d, e) = v;
                hmat.at(e, d) = v;
            }
        return hmat;
    }

    // ---- Euclidean volume quadrature -----------------------------------

    /// Midpoint-rule voxel sum of density over the masked domain, with
    /// partial-voxel correction at dU and dU_o from the implicit description.
    /// Region selection (sub/superlevel of f at height h) is by node value.
    double volume_integral(const std::function<double(const Vec&)>& density,
                           RegionSelect region = RegionSelect::whole, double h = 0.0) const {
        const double dv = voxel_volume();
        return parallel_sum(total_nodes_, [&](size_t i) {
            const Vec x = node_point(i);
            const double frac = voxel_fraction(x);
            if (frac <= 0.0) return 0.0;
            if (mask_[i] != NodeClass::outside) {
                double w = 1.0;
                if (region != RegionSelect::whole) {
                    // Clamped-linear coverage of the voxel by {f < h}: a hard
                    // center test aliases against the grid and spoils refinement.
                    const double phi = values_[i] - h;
                    double a = 0.0;
                    if (std::abs(phi) <= grad_cap * half_diag_) {
                        try {
                            a = gradient(i).norm() * half_diag_;
                        } catch (const std::domain_error&) {
                        }
                    }
                    w = a > 0.0 ? clamp01(0.5 - 0.5 * phi / a) : (phi < 0.0 ? 1.0 : 0.0);
                    if (region == RegionSelect::superlevel) w = 1.0 - w;
                    if (w <= 0.0) return 0.0;
                }
                return density(x) * frac * dv * w;
            }
            // Boundary sliver: the voxel straddles dU or dU_o with its center
            // just outside the mask. Use interpolated values; skip when no
            // neighbor carries data.
            try {
                if (region != RegionSelect::whole) {
                    const double v = value_at(x);
                    if (region == RegionSelect::sublevel && !(v < h)) return 0.0;
                    if (region == RegionSelect::superlevel && !(v >= h)) return 0.0;
                }
                return density(x) * frac * dv;
            } catch (const std::domain_error&) {
                return 0.0;
            }
        });
    }

    /// Volume of the masked region itself (density 1).
    double masked_volume(RegionSelect region = RegionSelect::whole, double h = 0.0) const {
        return volume_integral([](const Vec&) { return 1.0; }, region, h);
    }

    /// Covered fraction of the voxel centered at x, from 2^n corner samples
    /// of the implicit functions (clamped linear estimate per corner).
    double voxel_fraction(const Vec& x) const {
        const double half_diag = half_diag_;
        const double po = domain.phi_outer(x);
        const double pi = domain.phi_inner_min(x);
        if (po < -half_diag && pi > half_diag) return 1.0;  // deep interior
        if (po > half_diag || pi < -half_diag) return 0.0;
        double fo = 0.0, fi = 0.0;
        const int corners = 1 << dim();
        for (int c = 0; c < corners; ++c) {
            Vec y = x;
            for (int d = 0; d < dim(); ++d)
                y[d] += ((c >> d) & 1 ? 0.5 : -0.5) * h_[size_t(d)];
            fo += clamp01(0.5 - domain.phi_outer(y) / (2.0 * half_diag));
            fi += clamp01(0.5 + domain.phi_inner_min(y) / (2.0 * half_diag));
        }
        return (fo / corners) * (fi / corners);
    }

    const std::vector<double>& raw_values() const { return values_; }

  private:
    std::vector<double> values_;
    std::vector<NodeClass> mask_;
    std::array<double, kMaxDim> h_{};
    size_t total_nodes_ = 0;
    double half_diag_ = 0.0;
    double fmin_ = 0.0, fmax_ = 0.0;

    static double clamp01(double t) { return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t); }

    void require_valued(size_t flat, const char* op) const {
        if (flat >= total_nodes_ || mask_[flat] == NodeClass::outside)
            throw std::domain_error(std::string(op) + ": node outside the field mask");
    }

    void init_geometry() {
        total_nodes_ = 1;
        double d2 = 0.0;
        for (int i = 0; i < dim(); ++i) {
            const size_t r = size_t(grid.res[size_t(i)]);
            total_nodes_ *= r;
            h_[size_t(i)] = (domain.bbox_hi[i] - domain.bbox_lo[i]) / double(r);
            if (h_[size_t(i)] <= 0.0) throw std::invalid_argument("ScalarField: non-positive spacing");
            d2 += 0.25 * h_[size_t(i)] * h_[size_t(i)];
        }
        half_diag_ = std::sqrt(d2);
    }

    void sample_and_classify() {
        values_.assign(total_nodes_, std::numeric_limits<double>::quiet_NaN());
        classify_nodes(&*profile);
        parallel_for(total_nodes_, [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i)
                if (mask_[i] != NodeClass::outside) values_[i] = profile->f(node_point(i));
        });
        finalize_range();
    }

    void classify_nodes(const AnalyticProfile* prof) {
        mask_.assign(total_nodes_, NodeClass::outside);
        const double collar = 1.5 * max_spacing();
        parallel_for(total_nodes_, [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                const Vec x = node_point(i);
                const double po = domain.phi_outer(x);
                const double pi = domain.phi_inner_min(x);
                if (po >= 0.0 || pi <= 0.0) {
                    mask_[i] = NodeClass::outside;
                } else if (pi < collar) {
                    mask_[i] = NodeClass::near_inner;
                } else if (po > -collar) {
                    mask_[i] = NodeClass::near_outer;
                } else {
                    mask_[i] = NodeClass::interior;
                }
                if (mask_[i] == NodeClass::interior && prof && prof->grad) {
                    if (prof->grad(x).norm() > grad_cap) mask_[i] = NodeClass::near_inner;
                }
            }
        });
    }

    void finalize_range() {
        if (values_.empty()) {
            values_.assign(total_nodes_, std::numeric_limits<double>::quiet_NaN());
        }
        double lo = 1e300, hi = -1e300;
        for (size_t i = 0; i < total_nodes_; ++i) {
            if (mask_[i] == NodeClass::outside) continue;
            const double v = values_[i];
            if (!std::isfinite(v))
                throw std::invalid_argument("ScalarField: non-finite value on an interior node");
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (radial) {
            lo = std::min(lo, radial->f_min());
            hi = std::max(hi, radial->f_max());
        }
        fmin_ = lo;
        fmax_ = hi;
    }

    size_t shifted(size_t flat, int axis, int offset) const {
        auto idx = node_index(flat);
        idx[size_t(axis)] += offset;
        if (!index_valid(idx)) return SIZE_MAX;
        return flat_index(idx);
    }
    bool usable(size_t flat) const { return flat != SIZE_MAX && mask_[flat] != NodeClass::outside; }

    /// First derivative along an axis with mask-prescribed fallback:
    /// central -> one-sided second order -> clamped first order.
    template <class ValFn>
    double fd_first(size_t flat, int axis, ValFn val) const {
        const double hd = h_[size_t(axis)];
        const size_t p1 = shifted(flat, axis, 1), m1 = shifted(flat, axis, -1);
        const bool up = usable(p1), dn = usable(m1);
        if (up && dn) return (val(p1) - val(m1)) / (2.0 * hd);
        if (grid.boundary == GridSpec::Boundary::one_sided) {
            if (up) {
                const size_t p2 = shifted(flat, axis, 2);
                if (usable(p2)) return (-3.0 * val(flat) + 4.0 * val(p1) - val(p2)) / (2.0 * hd);
            }
            if (dn) {
                const size_t m2 = shifted(flat, axis, -2);
                if (usable(m2)) return (3.0 * val(flat) - 4.0 * val(m1) + val(m2)) / (2.0 * hd);
            }
        }
        if (up) return (val(p1) - val(flat)) / hd;
        if (dn) return (val(flat) - val(m1)) / hd;
        throw std::domain_error("gradient: no usable stencil at node");
    }

    double fd_second(size_t flat, int axis) const {
        const double hd = h_[size_t(axis)];
        const double h2 = hd * hd;
        auto val = [this](size_t k) { return values_[k]; };
        const size_t p1 = shifted(flat, axis, 1), m1 = shifted(flat, axis, -1);
        const bool up = usable(p1), dn = usable(m1);
        if (up && dn) return (val(p1) - 2.0 * val(flat) + val(m1)) / h2;
        if (up) {
            const size_t p2 = shifted(flat, axis, 2), p3 = shifted(flat, axis, 3);
            if (usable(p2) && usable(p3) && grid.boundary == GridSpec::Boundary::one_sided)
                return (2.0 * val(flat) - 5.0 * val(p1) + 4.0 * val(p2) - val(p3)) / h2;
            if (usable(p2)) return (val(flat) - 2.0 * val(p1) + val(p2)) / h2;
        }
        if (dn) {
            const size_t m2 = shifted(flat, axis, -2), m3 = shifted(flat, axis, -3);
            if (usable(m2) && usable(m3) && grid.boundary == GridSpec::Boundary::one_sided)
                return (2.0 * val(flat) - 5.0 * val(m1) + 4.0 * val(m2) - val(m3)) / h2;
            if (usable(m2)) return (val(flat) - 2.0 * val(m1) + val(m2)) / h2;
        }
        throw std::domain_error("hessian: no usable stencil at node");
    }

    double fd_mixed(size_t flat, int d, int e) const {
        // Prefer the symmetric 4-corner cross stencil.
        const size_t a = shifted(flat, d, 1), b = shifted(flat, d, -1);
        if (a != SIZE_MAX && b != SIZE_MAX) {
            const size_t app = shifted(a, e, 1), apm = shifted(a, e, -1);
            const size_t bpp = shifted(b, e, 1), bpm = shifted(b, e, -1);
            if (usable(app) && usable(apm) && usable(bpp) && usable(bpm))
                return (values_[app] - values_[apm] - values_[bpp] + values_[bpm]) /
                       (4.0 * h_[size_t(d)] * h_[size_t(e)]);
        }
        // Fall back to differentiating the one-axis derivative.
        return fd_first(flat, d, [this, e](size_t k) {
            return fd_first(k, e, [this](size_t j) { return values_[j]; });
        });
    }

    /// Multilinear interpolation over the 2^n surrounding nodes.
    template <class ValFn>
    double interpolate(const Vec& x, ValFn val) const {
        std::array<int, kMaxDim> base{};
        std::array<double, kMaxDim> w{};
        for (int d = 0; d < dim(); ++d) {
            const double t = (x[d] - domain.bbox_lo[d]) / h_[size_t(d)] - 0.5;
            // Clamping is only for points a sliver beyond the node lattice;
            // anything farther out is a caller error.
            if (t < -1.0 || t > double(grid.res[size_t(d)]))
                throw std::domain_error("interpolate: point outside the grid");
            double fl = std::floor(t);
            int i0 = int(fl);
            double wd = t - fl;
            if (i0 < 0) { i0 = 0; wd = 0.0; }
            if (i0 >= grid.res[size_t(d)] - 1) { i0 = grid.res[size_t(d)] - 2; wd = 1.0; }
            base[size_t(d)] = i0;
            w[size_t(d)] = wd;
        }
        double acc = 0.0, wsum = 0.0;
        const int corners = 1 << dim();
        for (int c = 0; c < corners; ++c) {
            auto idx = base;
            double wc = 1.0;
            for (int d = 0; d < dim(); ++d) {
                const int bit = (c >> d) & 1;
                idx[size_t(d)] += bit;
                wc *= bit ? w[size_t(d)] : 1.0 - w[size_t(d)];
            }
            if (wc == 0.0) continue;
            const size_t k = flat_index(idx);
            if (mask_[k] == NodeClass::outside) continue;
            acc += wc * val(k);
            wsum += wc;
        }
        if (wsum <= 0.0) throw std::domain_error("interpolate: point outside the field mask");
        return acc / wsum;
    }
};

/// Strip the analytic data from a field: keep only the node samples, so all
/// subsequent calculus runs through the finite-difference path.
inline ScalarField resample_without_profile(const ScalarField& fld) {
    std::vector<double> vals(fld.node_count());
    for (size_t i = 0; i < fld.node_count(); ++i) vals[i] = fld.value(i);
    return ScalarField::build_sampled(fld.domain, fld.grid, std::move(vals), fld.grad_cap);
}

}  // namespace qlm
