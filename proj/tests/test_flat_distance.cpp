#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qlm/families.hpp"
#include "qlm/flat_distance.hpp"

using namespace qlm;

namespace {

FamilySpec well_spec(double j) {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::gravity_well;
    spec.depth = 4.0 * j;
    spec.width = 0.5 / (j * j);
    spec.outer_radius = 4.0;
    spec.admissible_expected = false;
    return spec;
}

}  // namespace

TEST_CASE("fill heights: horizon components take the boundary value of f") {
    FamilySpec spec;
    spec.mass = 1.0;
    spec.outer_radius = 4.0;
    const ScalarField fld = instantiate(spec, GridSpec::uniform(3, 16));
    const auto fg = fill_graph(fld);
    REQUIRE(fg.component_height.size() == 1);
    CHECK(fg.component_height[0] == Catch::Approx(0.0).margin(1e-12));  // f(2m) = 0
}

TEST_CASE("decomposition masses reproduce a radial closed form") {
    // f = r on the unit ball (cone graph), reference height h.
    auto rp = std::make_shared<RadialProfile>();
    rp->n = 3;
    rp->r_min = 0.0;
    rp->r_max = 1.0;
    rp->f = [](double r) { return r; };
    rp->df = [](double) { return 1.0; };
    rp->ddf = [](double) { return 0.0; };
    const Domain dom(3, Region::make_ball(Vec(3), 1.0));
    const ScalarField fld =
        ScalarField::build(dom, GridSpec::uniform(3, 16), radial_to_analytic(rp), rp);

    const double h = 0.5;
    const auto dec = decompose(fld, h);
    // B+ = int_h^1 4 pi r^2 (r - h) dr, B- = int_0^h 4 pi r^2 (h - r) dr.
    auto plus = [&](double a, double b) {
        return 4.0 * kPi * ((std::pow(b, 4) - std::pow(a, 4)) / 4.0 -
                            h * (std::pow(b, 3) - std::pow(a, 3)) / 3.0);
    };
    CHECK(dec.mass_a == Catch::Approx(0.0).margin(1e-12));
    CHECK(dec.mass_b_plus == Catch::Approx(plus(h, 1.0)).epsilon(1e-8));
    CHECK(dec.mass_b_minus == Catch::Approx(-plus(0.0, h)).epsilon(1e-8));
    CHECK(dec.bound() == Catch::Approx(dec.mass_b_plus + dec.mass_b_minus).epsilon(1e-12));
}

TEST_CASE("filled horizon components contribute their volume to the defect") {
    FamilySpec spec;
    spec.mass = 1.0;
    spec.outer_radius = 4.0;
    const ScalarField fld = instantiate(spec, GridSpec::uniform(3, 16));
    const auto dec = decompose(fld, 0.0);  // reference at the fill height
    const double horizon_vol = 4.0 * kPi / 3.0 * 8.0;  // ball of radius 2m = 2
    CHECK(dec.mass_a == Catch::Approx(horizon_vol).epsilon(1e-12));
    CHECK(dec.mass_b_minus == Catch::Approx(0.0).margin(1e-10));
    CHECK(dec.mass_b_plus > 0.0);
}

TEST_CASE("deep narrow wells: flat-distance bound shrinks, sup distance grows") {
    const std::vector<double> js = {1.0, 2.0, 3.0, 4.0};
    const auto run = convergence_run(
        "wells", js, [](double j) { return well_spec(j); }, GridSpec::uniform(3, 16));
    REQUIRE(run.elements.size() == 4);
    for (size_t k = 1; k < run.elements.size(); ++k) {
        CHECK(run.elements[k].d_f_bound < run.elements[k - 1].d_f_bound);
        CHECK(run.elements[k].sup_distance > run.elements[k - 1].sup_distance);
    }
    CHECK(run.elements.back().d_f_bound < 1e-3);
    CHECK(run.elements.back().sup_distance == Catch::Approx(16.0).epsilon(1e-9));
}

TEST_CASE("mass sweep: bound comparison ratio stays bounded") {
    FamilySpec base;
    base.outer_radius = 16.0;
    std::vector<double> ratios;
    for (double m : {0.2, 0.1, 0.05}) {
        FamilySpec spec = base;
        spec.mass = m;
        const ScalarField fld = instantiate(spec, GridSpec::uniform(3, 16));
        const auto cmp = flat_bound_comparison(fld, boundary_mass(fld), 1.0);
        CHECK(cmp.computed > 0.0);
        ratios.push_back(cmp.ratio);
    }
    const double spread = *std::max_element(ratios.begin(), ratios.end()) /
                          *std::min_element(ratios.begin(), ratios.end());
    CHECK(spread < 20.0);
}

TEST_CASE("sweep bookkeeping: monotone masses and decreasing bounds") {
    FamilySpec base;
    base.outer_radius = 16.0;
    const std::vector<double> masses = {0.2, 0.1, 0.05, 0.025};
    const auto run = convergence_run(
        "shrinking", masses,
        [&](double m) {
            FamilySpec s = base;
            s.mass = m;
            return s;
        },
        GridSpec::uniform(3, 16));
    CHECK(run.monotone_mass);
    for (size_t k = 1; k < run.elements.size(); ++k)
        CHECK(run.elements[k].d_f_bound < run.elements[k - 1].d_f_bound);
    CHECK(run.df_slope > 0.0);
}
