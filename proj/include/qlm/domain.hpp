#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlm/constants.hpp"
#include "qlm/linalg.hpp"

namespace qlm {

enum class RegionKind { ball, box, implicit };

/// One implicitly described region: phi < 0 inside.
struct Region {
    RegionKind kind = RegionKind::ball;
    Vec center;            // ball
    double radius = 0.0;   // ball
    Vec box_lo, box_hi;    // box
    std::function<double(const Vec&)> sdf;  // implicit

    double phi(const Vec& x) const {
        switch (kind) {
            case RegionKind::ball:
                return (x - center).norm() - radius;
            case RegionKind::box: {
                double d = -1e300;
                for (int i = 0; i < x.n; ++i)
                    d = std::max(d, std::max(box_lo[i] - x[i], x[i] - box_hi[i]));
                return d;
            }
            case RegionKind::implicit:
                return sdf(x);
        }
        return 0.0;
    }

    double volume(int n) const {
        switch (kind) {
            case RegionKind::ball:
                return unit_ball_volume(n) * std::pow(radius, n);
            case RegionKind::box: {
                double v = 1.0;
                for (int i = 0; i < n; ++i) v *= box_hi[i] - box_lo[i];
                return v;
            }
            default:
                throw std::runtime_error("Region::volume: implicit region has no closed form");
        }
    }

    double boundary_area(int n) const {
        switch (kind) {
            case RegionKind::ball:
                return unit_sphere_area(n) * std::pow(radius, n - 1);
            case RegionKind::box: {
                double a = 0.0;
                for (int i = 0; i < n; ++i) {
                    double face = 1.0;
                    for (int j = 0; j < n; ++j)
                        if (j != i) face *= box_hi[j] - box_lo[j];
                    a += 2.0 * face;
                }
                return a;
            }
            default:
                throw std::runtime_error("Region::boundary_area: implicit region has no closed form");
        }
    }

    static Region make_ball(const Vec& c, double r) {
        Region g;
        g.kind = RegionKind::ball;
        g.center = c;
        g.radius = r;
        return g;
    }
    static Region make_box(const Vec& lo, const Vec& hi) {
        Region g;
        g.kind = RegionKind::box;
        g.box_lo = lo;
        g.box_hi = hi;
        return g;
    }
};

/// Domain U \supset U_o in R^n. U is the connected outer region, the inner
/// components are the (possibly empty) horizon plugs U_o.
struct Domain {
    int n = 3;
    Region outer;
    std::vector<Region> inner;
    Vec bbox_lo, bbox_hi;

    Domain() = default;
    Domain(int dim, Region out, std::vector<Region> in = {}) : n(dim), outer(std::move(out)), inner(std::move(in)) {
        if (n < 2 || n > kMaxDim) throw std::invalid_argument("Domain: dimension out of range");
        compute_bbox();
        validate();
    }
    /// Implicit outer regions need an explicit bounding box.
    Domain(int dim, Region out, std::vector<Region> in, Vec lo, Vec hi)
        : n(dim), outer(std::move(out)), inner(std::move(in)), bbox_lo(lo), bbox_hi(hi) {
        if (n < 2 || n > kMaxDim) throw std::invalid_argument("Domain: dimension out of range");
        validate();
    }

    double phi_outer(const Vec& x) const { return outer.phi(x); }
    double phi_inner(const Vec& x, size_t i) const { return inner[i].phi(x); }
    /// min over inner components; +inf when U_o is empty.
    double phi_inner_min(const Vec& x) const {
        double m = 1e300;
        for (const auto& g : inner) m = std::min(m, g.phi(x));
        return m;
    }
    bool inside(const Vec& x) const { return phi_outer(x) < 0.0 && phi_inner_min(x) > 0.0; }
    bool has_horizon() const { return !inner.empty(); }

    double boundary_area() const { return outer.boundary_area(n); }
    /// vol(U), the full outer region including the holes.
    double volume() const { return outer.volume(n); }
    double inner_volume() const {
        double v = 0.0;
        for (const auto& g : inner) v += g.volume(n);
        return v;
    }

  private:
    void compute_bbox() {
        bbox_lo = Vec(n);
        bbox_hi = Vec(n);
        switch (outer.kind) {
            case RegionKind::ball:
                for (int i = 0; i < n; ++i) {
                    bbox_lo[i] = outer.center[i] - outer.radius;
                    bbox_hi[i] = outer.center[i] + outer.radius;
                }
                break;
            case RegionKind::box:
                bbox_lo = outer.box_lo;
                bbox_hi = outer.box_hi;
                break;
            case RegionKind::implicit:
                throw std::invalid_argument("Domain: implicit outer region requires explicit bounding box");
        }
    }

    void validate() const {
        // U_o compactly contained in U with positive margin, components disjoint.
        for (size_t i = 0; i < inner.size(); ++i) {
            if (inner[i].kind == RegionKind::ball && outer.kind == RegionKind::ball) {
                const double margin = outer.radius - ((inner[i].center - outer.center).norm() + inner[i].radius);
                if (margin <= 0.0)
                    throw std::invalid_argument("Domain: inner component " + std::to_string(i) +
                                                " not compactly contained in U");
            }
            for (size_t j = i + 1; j < inner.size(); ++j) {
                if (inner[i].kind == RegionKind::ball && inner[j].kind == RegionKind::ball) {
                    if ((inner[i].center - inner[j].center).norm() <= inner[i].radius + inner[j].radius)
                        throw std::invalid_argument("Domain: inner components overlap");
                }
            }
        }
    }
};

}  // namespace qlm
