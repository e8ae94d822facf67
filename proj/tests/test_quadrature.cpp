#include "wigner/quadrature.hpp"

#include <cmath>

#include "doctest.h"
#include "wigner/errors.hpp"
#include "wigner/semicircle.hpp"

using namespace wigner;

TEST_CASE("gauss_legendre basics") {
    const auto& q = gauss_legendre(5);
    REQUIRE(q.size() == 5);
    double wsum = 0, x8 = 0;
    for (size_t j = 0; j < q.size(); ++j) {
        CHECK(q.w[j] > 0);
        wsum += q.w[j];
        x8 += q.w[j] * std::pow(q.x[j], 8);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // order 5 is exact through degree 9
    CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
    // symmetry of nodes
    for (size_t j = 0; j < q.size(); ++j)
        CHECK(q.x[j] == doctest::Approx(-q.x[q.size() - 1 - j]).epsilon(1e-14));
}

TEST_CASE("composite_gl integrates sin over [0,pi]") {
    auto q = composite_gl(0.0, M_PI, 8, 10);
    double s = 0;
    for (size_t j = 0; j < q.size(); ++j) s += q.w[j] * std::sin(q.x[j]);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(composite_gl(0.0, 1.0, 0, 4), argument_error);
    CHECK_THROWS_AS(composite_gl(1.0, 1.0, 2, 4), argument_error);
}

TEST_CASE("adaptive integration: semicircle mass and gaussian") {
    double mass = integrate_adaptive([](double x) { return sc::density(x); },
                                     -2.0, 2.0, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    double g = integrate_adaptive(
        [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); },
        -8.0, 8.0, 1e-12);
    CHECK(g == doctest::Approx(1.0).epsilon(1e-11));
    // orientation and empty interval
    CHECK(integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0, 1e-8) ==
          doctest::Approx(-1.0));
    CHECK(integrate_adaptive([](double) { return 1.0; }, 3.0, 3.0, 1e-8) == 0.0);
}
