#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qlm/families.hpp"
#include "qlm/level_set.hpp"

using namespace qlm;

namespace {

ScalarField horizon_field(int res = 24, double mass = 1.0, double radius = 4.0) {
    FamilySpec spec;
    spec.mass = mass;
    spec.outer_radius = radius;
    return instantiate(spec, GridSpec::uniform(3, res));
}

}  // namespace

TEST_CASE("radial extraction gives exact round spheres") {
    const ScalarField fld = horizon_field();
    const double h = fld.radial->f(3.0);
    const LevelSet ls = extract_level_set(fld, h);
    REQUIRE(ls.round_sphere);
    CHECK(ls.sphere_radius == Catch::Approx(3.0).epsilon(1e-10));
    CHECK(ls.area() == Catch::Approx(4.0 * kPi * 9.0).epsilon(1e-10));
    for (const auto& fc : ls.facets) {
        CHECK(fc.H_deg == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
        // H = Hdeg / sqrt(W), W = r/(r-2m) = 3.
        CHECK(fc.H == Catch::Approx((2.0 / 3.0) / std::sqrt(3.0)).epsilon(1e-10));
    }
}

TEST_CASE("heights outside the range give an empty slice") {
    const ScalarField fld = horizon_field();
    CHECK(extract_level_set(fld, fld.max_value() + 1.0).empty());
    CHECK(extract_level_set(fld, fld.min_value() - 1.0).empty());
}

TEST_CASE("gridded marching extraction approximates sphere area and curvature") {
    const ScalarField fld = resample_without_profile(horizon_field(64));
    const double h = horizon_field(16).radial->f(3.0);
    const LevelSet ls = extract_level_set(fld, h);
    REQUIRE_FALSE(ls.empty());
    REQUIRE(ls.regular);
    CHECK(std::abs(ls.area() - 4.0 * kPi * 9.0) / (4.0 * kPi * 9.0) < 0.02);
    const double mean_h =
        surface_integral(ls, [](const Facet& fc) { return fc.H_deg; }) / ls.area();
    CHECK(mean_h == Catch::Approx(2.0 / 3.0).epsilon(0.02));
}

TEST_CASE("decreasing radial profiles carry the sign of the slice normal") {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::bump;
    spec.amplitude = 1.0;
    spec.outer_radius = 4.0;
    const ScalarField fld = instantiate(spec, GridSpec::uniform(3, 16));
    // Away from the center the bump decreases in r, so the normal Df/|Df|
    // points inward and Hdeg is negative on round slices.
    const double h = 0.5 * (fld.min_value() + fld.max_value());
    const LevelSet ls = extract_level_set(fld, h);
    REQUIRE(ls.round_sphere);
    for (const auto& fc : ls.facets) CHECK(fc.H_deg < 0.0);
}

TEST_CASE("area ladder: the two first-variation methods agree") {
    const ScalarField fld = horizon_field(24);
    const AreaProfile prof = area_profile(fld, 40);
    REQUIRE(prof.h.size() == 40);
    size_t compared = 0;
    for (size_t k = 1; k + 1 < prof.h.size(); ++k) {
        if (!prof.regular[k]) continue;
        // V'(h) = 8 pi r^2 sqrt(r - 2m) / sqrt(8 m) / ... use the chain rule:
        // dV/dh = 2 w r / f'(r).
        const double r = fld.radial->radius_of_height(prof.h[k]);
        const double oracle = 8.0 * kPi * r / fld.radial->df(r);
        CHECK(prof.dA_var[k] == Catch::Approx(oracle).epsilon(1e-6));
        CHECK(prof.dA_fd[k] == Catch::Approx(oracle).epsilon(0.05));
        ++compared;
    }
    CHECK(compared > 30);
}

TEST_CASE("level areas are monotone for a monotone radial profile") {
    const ScalarField fld = horizon_field(16);
    const AreaProfile prof = area_profile(fld, 60);
    for (size_t k = 1; k < prof.h.size(); ++k)
        CHECK(prof.area[k] >= prof.area[k - 1] - 1e-9);
    // Every slice stays inside the outer boundary area.
    const double outer = fld.domain.boundary_area();
    for (double a : prof.area) CHECK(a <= outer * (1.0 + 1e-9));
}

TEST_CASE("near-critical slices are flagged and rejected") {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::bump;
    spec.amplitude = 1.0;
    spec.outer_radius = 4.0;
    const ScalarField fld = resample_without_profile(instantiate(spec, GridSpec::uniform(3, 32)));
    // The top of the bump is a critical point; the slice just below it is
    // extracted but carries near-critical facets.
    const double h = fld.max_value() - 1e-6 * (fld.max_value() - fld.min_value());
    const LevelSet ls = extract_level_set(fld, h);
    if (!ls.empty() && !ls.regular) CHECK_THROWS_AS(level_mean_curvatures(fld, ls), std::domain_error);
}

TEST_CASE("surface integral of unity is the area") {
    const ScalarField fld = resample_without_profile(horizon_field(32));
    const LevelSet ls = extract_level_set(fld, 0.5 * (fld.min_value() + fld.max_value()));
    CHECK(surface_integral(ls, [](const Facet&) { return 1.0; }) ==
          Catch::Approx(ls.area()).epsilon(1e-12));
}
