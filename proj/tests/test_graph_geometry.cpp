#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qlm/families.hpp"
#include "qlm/graph_geometry.hpp"
#include "qlm/mass.hpp"

using namespace qlm;

namespace {

Vec vec3(double x, double y, double z) {
    Vec v(3);
    v[0] = x;
    v[1] = y;
    v[2] = z;
    return v;
}

// Upper hemisphere graph of radius rho: the graph is a round sphere in R^4,
// mean curvature n/rho, scalar curvature n(n-1)/rho^2, principal curvatures
// all 1/rho.
GraphCurvatureSample hemisphere_sample(double rho, const Vec& x) {
    const double r2 = x.dot(x);
    const double s = std::sqrt(rho * rho - r2);
    Vec g(3);
    for (int i = 0; i < 3; ++i) g[i] = -x[i] / s;
    SymMat h(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            h.at(i, j) = -((i == j ? 1.0 : 0.0) / s + x[i] * x[j] / (s * s * s));
    return curvature_from_derivatives(x, g, h);
}

}  // namespace

TEST_CASE("hemisphere graph carries constant curvature") {
    const double rho = 2.0;
    for (const Vec& x : {vec3(0.3, -0.2, 0.5), vec3(1.0, 0.4, -0.3), vec3(0.0, 0.0, 0.0)}) {
        const auto s = hemisphere_sample(rho, x);
        CHECK(s.H_hat == Catch::Approx(-3.0 / rho).epsilon(1e-10));  // downward normal convention
        CHECK(s.R == Catch::Approx(6.0 / (rho * rho)).epsilon(1e-10));
        CHECK(s.max_sectional == Catch::Approx(1.0 / (rho * rho)).epsilon(1e-10));
    }
}

TEST_CASE("scalar-flat profile: R vanishes and closed forms match") {
    FamilySpec spec;
    spec.mass = 1.0;
    spec.outer_radius = 4.0;
    const ScalarField fld = instantiate(spec, GridSpec::uniform(3, 16));
    REQUIRE(fld.radial);
    for (double r : {2.5, 3.0, 3.5, 4.0}) {
        const auto c = radial_curvature(*fld.radial, r);
        // f = sqrt(8m(r-2m)): f' = sqrt(2m/(r-2m)), W = r/(r-2m).
        const double fp = std::sqrt(2.0 / (r - 2.0));
        const double w = r / (r - 2.0);
        CHECK(c.kappa_tan == Catch::Approx(fp / (r * std::sqrt(w))).epsilon(1e-12));
        CHECK(std::abs(c.R) < 1e-12);
        CHECK(c.H_hat == Catch::Approx(c.kappa_rad + 2.0 * c.kappa_tan).epsilon(1e-12));
    }
    const auto c4 = radial_curvature(*fld.radial, 4.0);
    CHECK(c4.kappa_rad == Catch::Approx(-0.0883883476483).epsilon(1e-9));
    CHECK(c4.kappa_tan == Catch::Approx(0.176776695297).epsilon(1e-9));
}

TEST_CASE("radial and tensor curvature paths agree") {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::bump;
    spec.amplitude = 0.7;
    spec.outer_radius = 4.0;
    const ScalarField fld = instantiate(spec, GridSpec::uniform(3, 16));
    REQUIRE(fld.radial);
    for (double r : {0.5, 1.1, 2.0, 3.1}) {
        const auto rc = radial_curvature(*fld.radial, r);
        Vec x = vec3(0.48, 0.0, 0.0);
        x = x * (r / x.norm());
        const auto ts = curvature_from_derivatives(x, fld.profile->grad(x), fld.profile->hess(x));
        CHECK(ts.H_hat == Catch::Approx(rc.H_hat).margin(1e-10));
        CHECK(ts.R == Catch::Approx(rc.R).margin(1e-10));
    }
}

TEST_CASE("gauss identity holds by construction on arbitrary data") {
    const Vec g = vec3(0.3, -1.2, 0.8);
    SymMat h(3);
    h.at(0, 0) = 1.0;
    h.at(1, 1) = -2.0;
    h.at(2, 2) = 0.5;
    h.at(0, 1) = h.at(1, 0) = 0.7;
    h.at(0, 2) = h.at(2, 0) = -0.1;
    h.at(1, 2) = h.at(2, 1) = 0.4;
    const auto s = curvature_from_derivatives(vec3(0, 0, 0), g, h);
    CHECK(s.R == Catch::Approx(s.H_hat * s.H_hat - s.pi_norm_sq).margin(1e-12));
}

TEST_CASE("curvature is invariant under coordinate rotation") {
    // Rotate gradient and Hessian by a rotation in the (x,y) plane.
    const double th = 0.7;
    const double c = std::cos(th), sn = std::sin(th);
    const Vec g = vec3(0.4, -0.9, 0.2);
    SymMat h(3);
    h.at(0, 0) = 1.3;
    h.at(1, 1) = -0.2;
    h.at(2, 2) = 0.8;
    h.at(0, 1) = h.at(1, 0) = 0.5;
    const auto base = curvature_from_derivatives(vec3(0, 0, 0), g, h);

    Vec gr = vec3(c * g[0] - sn * g[1], sn * g[0] + c * g[1], g[2]);
    double rot[3][3] = {{c, -sn, 0.0}, {sn, c, 0.0}, {0.0, 0.0, 1.0}};
    SymMat hr(3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double acc = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) acc += rot[a][i] * h.at(i, j) * rot[b][j];
            hr.at(a, b) = acc;
        }
    const auto rotd = curvature_from_derivatives(vec3(0, 0, 0), gr, hr);
    CHECK(rotd.H_hat == Catch::Approx(base.H_hat).margin(1e-12));
    CHECK(rotd.R == Catch::Approx(base.R).margin(1e-12));
    CHECK(rotd.max_sectional == Catch::Approx(base.max_sectional).margin(1e-10));
}

TEST_CASE("admissibility: horizon profile passes, saddle-like data fails") {
    FamilySpec sch;
    sch.mass = 1.0;
    sch.outer_radius = 4.0;
    const auto rep = check_admissibility(instantiate(sch, GridSpec::uniform(3, 24)));
    CHECK(rep.curvature_verdict == Verdict::pass);
    CHECK(rep.mean_convex_verdict == Verdict::pass);
    CHECK(rep.locally_constant_verdict == Verdict::pass);
    CHECK(rep.admissible());

    // Saddle: R < 0 everywhere away from the axes.
    AnalyticProfile saddle;
    saddle.f = [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; };
    saddle.grad = [](const Vec& x) { return vec3(2.0 * x[0], -2.0 * x[1], 0.0); };
    saddle.hess = [](const Vec&) {
        SymMat h(3);
        h.at(0, 0) = 2.0;
        h.at(1, 1) = -2.0;
        return h;
    };
    const Domain dom(3, Region::make_ball(Vec(3), 1.0));
    const auto bad =
        check_admissibility(ScalarField::build(dom, GridSpec::uniform(3, 24), saddle));
    CHECK(bad.curvature_verdict == Verdict::fail);
    CHECK_FALSE(bad.admissible());
}

TEST_CASE("mean curvature slices of a horizon profile are single-signed") {
    FamilySpec sch;
    sch.mass = 1.0;
    sch.outer_radius = 4.0;
    const auto rep = mean_curvature_sign_check(instantiate(sch, GridSpec::uniform(3, 24)));
    CHECK(rep.verdict == SignVerdict::single_signed_positive);
    CHECK(rep.negative == 0);
}

TEST_CASE("sectional-bound ball criterion") {
    FamilySpec flat;
    flat.kind = FamilySpec::Kind::constant;
    flat.outer_radius = 2.0;
    const auto triv = ball_criterion(instantiate(flat, GridSpec::uniform(3, 16)), 0.0);
    CHECK(triv.trivially_flat);
    CHECK(triv.verdict == Verdict::pass);

    FamilySpec sch;
    sch.mass = 1.0;
    sch.outer_radius = 4.0;
    const ScalarField fld = instantiate(sch, GridSpec::uniform(3, 16));
    const auto rep = ball_criterion(fld, boundary_mass(fld));
    CHECK(rep.sectional_bound >= 0.0);
    CHECK(rep.verdict != Verdict::unverifiable);
}
