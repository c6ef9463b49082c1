#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "qlm/constants.hpp"
#include "qlm/linalg.hpp"
#include "qlm/ode.hpp"
#include "qlm/parallel.hpp"
#include "qlm/quadrature.hpp"

using namespace qlm;

TEST_CASE("adaptive quadrature reproduces closed forms") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 2.0, 1e-12) ==
          Catch::Approx(8.0 / 3.0).epsilon(1e-11));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12) ==
          Catch::Approx(2.0).epsilon(1e-10));
    // Oscillatory with sharp features.
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-12) ==
          Catch::Approx(std::sqrt(kPi)).epsilon(1e-10));
}

TEST_CASE("sqrt-singular quadrature handles an inverse-sqrt endpoint") {
    // int_1^2 1/sqrt(x-1) dx = 2.
    const double v =
        integrate_sqrt_singular_lo([](double x) { return 1.0 / std::sqrt(x - 1.0); }, 1.0, 2.0);
    CHECK(v == Catch::Approx(2.0).epsilon(1e-8));
    // int_0^1 x/sqrt(x) dx = 2/3.
    const double w =
        integrate_sqrt_singular_lo([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(w == Catch::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("rk4 self-test: exponential within 1e-9") {
    const auto tr = rk4([](double, double y) { return y; }, 1.0, 0.0, 1.0, 1000);
    CHECK(std::abs(tr.y.back() - std::exp(1.0)) < 1e-9);
    // Interpolated evaluation stays close at interior times.
    CHECK(tr.eval(0.5) == Catch::Approx(std::exp(0.5)).epsilon(1e-6));
}

TEST_CASE("sphere area and ball volume constants") {
    CHECK(unit_sphere_area(3) == Catch::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(unit_sphere_area(4) == Catch::Approx(2.0 * kPi * kPi).epsilon(1e-14));
    CHECK(unit_ball_volume(3) == Catch::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
    // w_{n-1} = n * vol(B_1^n).
    for (int n = 2; n <= 8; ++n)
        CHECK(unit_sphere_area(n) == Catch::Approx(n * unit_ball_volume(n)).epsilon(1e-13));
}

TEST_CASE("jacobi eigenvalues on a known 3x3 matrix") {
    SymMat m(3);
    m.at(0, 0) = 2.0;
    m.at(1, 1) = 3.0;
    m.at(2, 2) = 4.0;
    m.at(0, 1) = m.at(1, 0) = 1.0;
    const auto ev = sym_eigenvalues(m);
    // Eigenvalues of [[2,1,0],[1,3,0],[0,0,4]]: (5 +- sqrt 5)/2 and 4.
    CHECK(ev[0] == Catch::Approx((5.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(ev[1] == Catch::Approx((5.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(ev[2] == Catch::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("linear solve round-trips") {
    SymMat a(3);
    a.at(0, 0) = 4.0;
    a.at(1, 1) = 5.0;
    a.at(2, 2) = 6.0;
    a.at(0, 1) = a.at(1, 0) = 1.0;
    a.at(1, 2) = a.at(2, 1) = 2.0;
    Vec b(3);
    b[0] = 1.0;
    b[1] = 2.0;
    b[2] = 3.0;
    const Vec x = solve_linear(a, b);
    const Vec r = a.apply(x) - b;
    CHECK(r.norm() < 1e-12);
}

TEST_CASE("parallel sum is deterministic across thread counts") {
    auto term = [](size_t i) { return std::sin(double(i)) / double(i + 1); };
    const size_t count = 1 << 18;
    const double base = parallel_sum(count, term);
    const double again = parallel_sum(count, term);
    CHECK(base == again);  // bitwise equality, fixed chunking and combine order
}
