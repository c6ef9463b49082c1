#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlm/field.hpp"
#include "qlm/graph_geometry.hpp"
#include "qlm/parallel.hpp"

namespace qlm {

/// One facet of an extracted level set with its geometric samples.
struct Facet {
    Vec centroid;
    double area = 0.0;
    double grad_norm = 0.0;  // |Df| at the centroid
    double H_deg = 0.0;      // Euclidean mean curvature in the horizontal slice
    double H = 0.0;          // mean curvature inside the graph, H_deg / sqrt(1+|Df|^2)
};

/// Sigma_h = {f = h}. In analytic radial mode a single "facet" carries the
/// whole round sphere; in grid mode the set is a simplicial mesh.
struct LevelSet {
    double h = 0.0;
    std::vector<Facet> facets;
    bool regular = true;
    bool round_sphere = false;
    double sphere_radius = 0.0;

    bool empty() const { return facets.empty(); }
    double area() const {
        double a = 0.0;
        for (const auto& f : facets) a += f.area;
        return a;
    }
    double min_grad() const {
        double g = std::numeric_limits<double>::infinity();
        for (const auto& f : facets) g = std::min(g, f.grad_norm);
        return g;
    }
};

namespace detail {

/// Sample the slice curvatures at a point: Hdeg = Delta f/|Df| - Hess(Df,Df)/|Df|^3.
inline void fill_facet_samples(const ScalarField& fld, Facet& fc) {
    const Vec df = fld.gradient_at(fc.centroid);
    const SymMat hs = fld.hessian_at(fc.centroid);
    const double g = df.norm();
    fc.grad_norm = g;
    if (g < 1e-300) {
        fc.H_deg = 0.0;
        fc.H = 0.0;
        return;
    }
    double lap = 0.0;
    for (int i = 0; i < fld.dim(); ++i) lap += hs.at(i, i);
    fc.H_deg = lap / g - hs.quad(df) / (g * g * g);
    fc.H = fc.H_deg / std::sqrt(1.0 + g * g);
}

inline double tri_area(const Vec& a, const Vec& b, const Vec& c) {
    // n = 3 only.
    Vec u = b - a, v = c - a;
    const double cx = u[1] * v[2] - u[2] * v[1];
    const double cy = u[2] * v[0] - u[0] * v[2];
    const double cz = u[0] * v[1] - u[1] * v[0];
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

inline Vec edge_cut(const Vec& a, const Vec& b, double fa, double fb, double h) {
    const double t = (h - fa) / (fb - fa);
    return a + (b - a) * std::clamp(t, 0.0, 1.0);
}

// The 6-tetrahedra decomposition of the unit cube (corner indices in the
// usual bitmask order x + 2y + 4z).
inline const int (&cube_tets())[6][4] {
    static const int t[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                                {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};
    return t;
}

}  // namespace detail

/// Extract {f = h}. Radial monotone profiles yield the exact round sphere;
/// grids use marching simplices (n = 3 tetrahedra, n = 2 triangles).
inline LevelSet extract_level_set(const ScalarField& fld, double h) {
    LevelSet ls;
    ls.h = h;
    const double lo = fld.min_value(), hi = fld.max_value();
    if (h < lo || h > hi) return ls;  // empty, not an error

    if (fld.radial && fld.radial->monotone) {
        const auto& rp = *fld.radial;
        const double r = rp.radius_of_height(h);
        if (r <= 0.0 || r > rp.r_max * (1.0 + 1e-12)) return ls;
        ls.round_sphere = true;
        ls.sphere_radius = r;
        Facet fc;
        fc.centroid = Vec(fld.dim());
        fc.centroid[0] = r;
        fc.area = unit_sphere_area(fld.dim()) * std::pow(r, fld.dim() - 1);
        const double fp = std::abs(rp.df(r));
        fc.grad_norm = fp;
        // Hdeg carries the sign of the normal Df/|Df|: -r_hat for decreasing f.
        fc.H_deg = (rp.increasing ? 1.0 : -1.0) * double(fld.dim() - 1) / r;
        fc.H = std::isfinite(fp) ? fc.H_deg / std::sqrt(1.0 + fp * fp) : 0.0;
        ls.facets.push_back(fc);
        return ls;
    }

    const int n = fld.dim();
    if (n != 2 && n != 3)
        throw std::invalid_argument(
            "extract_level_set: grid extraction implemented for n = 2 and n = 3 only; "
            "higher dimensions require an analytic radial profile");

    // Values nudged off exact hits so every simplex case is generic.
    auto val = [&](size_t flat) {
        const double v = fld.value(flat);
        const double eps = 1e-12 * (1.0 + std::abs(h));
        return v == h ? v + eps : v;
    };

    std::array<int, kMaxDim> cells{};
    size_t ncells = 1;
    for (int d = 0; d < n; ++d) {
        cells[size_t(d)] = fld.grid.res[size_t(d)] - 1;
        ncells *= size_t(cells[size_t(d)]);
    }

    const int nchunks = std::max(1, worker_count() * 4);
    std::vector<std::vector<Facet>> parts{size_t(nchunks)};
    const size_t chunk = (ncells + size_t(nchunks) - 1) / size_t(nchunks);
    parallel_for(size_t(nchunks), [&](size_t clo, size_t chi) {
        for (size_t c = clo; c < chi; ++c) {
            auto& out = parts[c];
            const size_t cell_lo = c * chunk, cell_hi = std::min(ncells, cell_lo + chunk);
            for (size_t cell = cell_lo; cell < cell_hi; ++cell) {
                // Unpack the cell index.
                std::array<int, kMaxDim> ci{};
                size_t rem = cell;
                for (int d = n - 1; d >= 0; --d) {
                    ci[size_t(d)] = int(rem % size_t(cells[size_t(d)]));
                    rem /= size_t(cells[size_t(d)]);
                }
                // Gather the 2^n corner nodes; skip cells touching the mask edge.
                const int corners = 1 << n;
                std::array<size_t, 8> flat{};
                std::array<double, 8> fv{};
                std::array<Vec, 8> xv{};
                bool ok = true;
                for (int k = 0; k < corners && ok; ++k) {
                    auto idx = ci;
                    for (int d = 0; d < n; ++d) idx[size_t(d)] += (k >> d) & 1;
                    const size_t fl = fld.flat_index(idx);
                    if (!fld.has_value(fl)) { ok = false; break; }
                    flat[size_t(k)] = fl;
                    fv[size_t(k)] = val(fl);
                    xv[size_t(k)] = fld.node_point(fl);
                }
                if (!ok) continue;

                if (n == 3) {
                    for (const auto& tet : detail::cube_tets()) {
                        int below = 0;
                        for (int v = 0; v < 4; ++v)
                            if (fv[size_t(tet[v])] < h) ++below;
                        if (below == 0 || below == 4) continue;
                        int lo_ids[4], hi_ids[4];
                        int nlo = 0, nhi = 0;
                        for (int v = 0; v < 4; ++v)
                            (fv[size_t(tet[v])] < h ? lo_ids[nlo++] : hi_ids[nhi++]) = tet[v];
                        auto cut = [&](int a, int b) {
                            return detail::edge_cut(xv[size_t(a)], xv[size_t(b)], fv[size_t(a)],
                                                    fv[size_t(b)], h);
                        };
                        auto push_tri = [&](const Vec& p, const Vec& q, const Vec& r) {
                            Facet fc;
                            fc.area = detail::tri_area(p, q, r);
                            if (fc.area <= 0.0) return;
                            fc.centroid = (p + q + r) * (1.0 / 3.0);
                            out.push_back(fc);
                        };
                        if (below == 1 || below == 3) {
                            const int apex = below == 1 ? lo_ids[0] : hi_ids[0];
                            const int* base = below == 1 ? hi_ids : lo_ids;
                            push_tri(cut(apex, base[0]), cut(apex, base[1]), cut(apex, base[2]));
                        } else {
                            const Vec p00 = cut(lo_ids[0], hi_ids[0]), p01 = cut(lo_ids[0], hi_ids[1]);
                            const Vec p10 = cut(lo_ids[1], hi_ids[0]), p11 = cut(lo_ids[1], hi_ids[1]);
                            push_tri(p00, p01, p11);
                            push_tri(p00, p11, p10);
                        }
                    }
                } else {  // n == 2: two triangles per cell, one segment each
                    static const int tris[2][3] = {{0, 1, 3}, {0, 3, 2}};
                    for (const auto& tri : tris) {
                        int lo_ids[3], hi_ids[3];
                        int nlo = 0, nhi = 0;
                        for (int v = 0; v < 3; ++v)
                            (fv[size_t(tri[v])] < h ? lo_ids[nlo++] : hi_ids[nhi++]) = tri[v];
                        if (nlo == 0 || nlo == 3) continue;
                        const int apex = nlo == 1 ? lo_ids[0] : hi_ids[0];
                        const int* other = nlo == 1 ? hi_ids : lo_ids;
                        const Vec p = detail::edge_cut(xv[size_t(apex)], xv[size_t(other[0])],
                                                      fv[size_t(apex)], fv[size_t(other[0])], h);
                        const Vec q = detail::edge_cut(xv[size_t(apex)], xv[size_t(other[1])],
                                                      fv[size_t(apex)], fv[size_t(other[1])], h);
                        Facet fc;
                        fc.area = (p - q).norm();
                        if (fc.area <= 0.0) continue;
                        fc.centroid = (p + q) * 0.5;
                        out.push_back(fc);
                    }
                }
            }
        }
    }, 1);
    for (auto& part : parts)
        for (auto& fc : part) ls.facets.push_back(std::move(fc));

    double gmax = 0.0, gmin = std::numeric_limits<double>::infinity();
    for (auto& fc : ls.facets) {
        detail::fill_facet_samples(fld, fc);
        gmax = std::max(gmax, fc.grad_norm);
        gmin = std::min(gmin, fc.grad_norm);
    }
    const double eps_reg = 1e-8 * std::max(gmax, 1e-300);
    ls.regular = ls.facets.empty() || gmin > eps_reg;
    return ls;
}

/// Recompute (Hdeg, H) per facet; error out on near-critical facets.
inline std::vector<std::pair<double, double>> level_mean_curvatures(const ScalarField& fld,
                                                                    const LevelSet& ls) {
    double gmax = 0.0;
    for (const auto& fc : ls.facets) gmax = std::max(gmax, fc.grad_norm);
    const double eps_reg = 1e-8 * std::max(gmax, 1e-300);
    std::vector<size_t> bad;
    std::vector<std::pair<double, double>> out;
    out.reserve(ls.facets.size());
    for (size_t i = 0; i < ls.facets.size(); ++i) {
        if (ls.facets[i].grad_norm <= eps_reg) bad.push_back(i);
        out.emplace_back(ls.facets[i].H_deg, ls.facets[i].H);
    }
    if (!bad.empty())
        throw std::domain_error("level_mean_curvatures: " + std::to_string(bad.size()) +
                                " near-critical facets (first index " + std::to_string(bad[0]) +
                                ")");
    return out;
}

/// Midpoint-rule surface integral: sum of density(facet) * area.
inline double surface_integral(const LevelSet& ls,
                               const std::function<double(const Facet&)>& density) {
    double s = 0.0;
    for (const auto& fc : ls.facets) s += density(fc) * fc.area;
    return s;
}

struct AreaProfile {
    std::vector<double> h;
    std::vector<double> area;         // V(h)
    std::vector<double> dA_fd;        // centered difference of V
    std::vector<double> dA_var;       // first-variation integral of Hdeg/|Df|
    std::vector<bool> regular;
    bool degenerate = false;          // constant graph: single jump, no ladder
};

/// Area ladder with V'(h) by two independent methods.
inline AreaProfile area_profile(const ScalarField& fld, int ladder = 200) {
    AreaProfile prof;
    const double lo = fld.min_value(), hi = fld.max_value();
    if (!(hi - lo > 1e-13 * (1.0 + std::abs(hi)))) {
        prof.degenerate = true;
        return prof;
    }
    prof.h.resize(size_t(ladder));
    prof.area.assign(size_t(ladder), 0.0);
    prof.dA_fd.assign(size_t(ladder), std::numeric_limits<double>::quiet_NaN());
    prof.dA_var.assign(size_t(ladder), std::numeric_limits<double>::quiet_NaN());
    prof.regular.assign(size_t(ladder), false);
    std::vector<char> reg(size_t(ladder), 0);
    for (int k = 0; k < ladder; ++k)
        prof.h[size_t(k)] = lo + (hi - lo) * double(k + 1) / double(ladder + 1);
    parallel_for(size_t(ladder), [&](size_t klo, size_t khi) {
        for (size_t k = klo; k < khi; ++k) {
            const LevelSet ls = extract_level_set(fld, prof.h[k]);
            prof.area[k] = ls.area();
            reg[k] = ls.regular && !ls.empty() ? 1 : 0;
            if (reg[k]) {
                prof.dA_var[k] =
                    surface_integral(ls, [](const Facet& fc) { return fc.H_deg / fc.grad_norm; });
            }
        }
    }, 1);
    for (int k = 0; k < ladder; ++k) prof.regular[size_t(k)] = reg[size_t(k)] != 0;
    for (int k = 1; k + 1 < ladder; ++k) {
        if (!prof.regular[size_t(k)]) continue;
        prof.dA_fd[size_t(k)] = (prof.area[size_t(k) + 1] - prof.area[size_t(k) - 1]) /
                                (prof.h[size_t(k) + 1] - prof.h[size_t(k) - 1]);
    }
    return prof;
}

}  // namespace qlm
