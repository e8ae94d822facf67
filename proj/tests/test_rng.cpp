#include "wigner/rng.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "wigner/errors.hpp"

using namespace wigner;

static double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TEST_CASE("philox determinism and stream separation") {
    CHECK(rng::philox(1, 2, 3) == rng::philox(1, 2, 3));
    CHECK(rng::philox(1, 2, 3) != rng::philox(1, 2, 4));
    CHECK(rng::philox(1, 2, 3) != rng::philox(1, 3, 3));
    CHECK(rng::philox(1, 2, 3) != rng::philox(2, 2, 3));
    // no collisions over a small window
    std::vector<std::uint64_t> seen;
    for (std::uint64_t c = 0; c < 4096; ++c) seen.push_back(rng::philox(7, 0, c));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("uniform01 range and moments") {
    const int M = 100000;
    double s = 0, s2 = 0;
    for (int i = 0; i < M; ++i) {
        double u = rng::uniform01(11, 0, i);
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
    }
    const double mean = s / M, var = s2 / M - mean * mean;
    CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * M));
    CHECK(std::abs(var - 1.0 / 12.0) < 5.0 * 0.0745 / std::sqrt(double(M)));
}

TEST_CASE("ppnd16 inverts the normal CDF") {
    CHECK(rng::ppnd16(0.5) == 0.0);
    for (double p : {1e-12, 1e-9, 1e-4, 0.025, 0.3, 0.5, 0.7, 0.975,
                     1 - 1e-4, 1 - 1e-9}) {
        const double x = rng::ppnd16(p);
        CHECK(std::abs(phi(x) - p) <= 1e-13 * std::max(p, 1e-3));
    }
    // antisymmetry, probed at dyadic offsets so 0.5 +/- q are both exact
    for (double q : {0.25, 0.125, 3.0 / 1024, 1.0 / 4096, 255.0 / 512}) {
        CHECK(rng::ppnd16(0.5 + q) == doctest::Approx(-rng::ppnd16(0.5 - q)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(rng::ppnd16(0.0), argument_error);
    CHECK_THROWS_AS(rng::ppnd16(1.0), argument_error);
    CHECK_THROWS_AS(rng::ppnd16(-0.1), argument_error);
}

TEST_CASE("standardized draws match closed-form moments within 5 SE") {
    const int M = 100000;
    std::vector<std::pair<rng::DistSpec, double>> dists = {
        {{rng::Dist::gaussian, 0.5}, 3.0},
        {{rng::Dist::rademacher, 0.5}, 1.0},
        {{rng::Dist::uniform, 0.5}, 9.0 / 5.0},
        {{rng::Dist::shifted_bernoulli, 0.3}, (1 - 3 * 0.3 * 0.7) / (0.3 * 0.7)},
    };
    std::uint64_t stream = 100;
    for (const auto& [d, m4] : dists) {
        double s1 = 0, s2 = 0, s4 = 0, s8 = 0;
        for (int i = 0; i < M; ++i) {
            const double x = rng::draw(d, 21, stream, i);
            s1 += x;
            s2 += x * x;
            s4 += x * x * x * x;
            s8 += std::pow(x, 8);
        }
        ++stream;
        const double mean = s1 / M, var = s2 / M, m4e = s4 / M;
        CHECK(std::abs(mean) < 5.0 / std::sqrt(double(M)));
        const double se_var = std::sqrt(std::max(m4e - var * var, 0.0) / M);
        CHECK(std::abs(var - 1.0) < 5.0 * se_var + 1e-12);
        const double se_m4 = std::sqrt(std::max(s8 / M - m4e * m4e, 0.0) / M);
        CHECK(std::abs(m4e - m4) < 5.0 * se_m4 + 1e-12);
        CHECK(rng::kappa4(d) == doctest::Approx(m4 - 3.0).epsilon(1e-12));
    }
}

TEST_CASE("inverse-CDF coupling: gaussian sign equals rademacher draw") {
    for (int i = 0; i < 1000; ++i) {
        const double g = rng::draw({rng::Dist::gaussian, 0.5}, 5, 9, i);
        const double r = rng::draw({rng::Dist::rademacher, 0.5}, 5, 9, i);
        CHECK((g < 0 ? -1.0 : 1.0) == r);
    }
}

TEST_CASE("dist parsing and errors") {
    CHECK(rng::parse_dist("gaussian").tag == rng::Dist::gaussian);
    CHECK(rng::parse_dist("shifted_bernoulli", 0.25).p == 0.25);
    CHECK(rng::dist_name(rng::parse_dist("uniform")) == "uniform");
    CHECK_THROWS_AS(rng::parse_dist("cauchy"), argument_error);
    CHECK_THROWS_AS(rng::draw({rng::Dist::shifted_bernoulli, 1.2}, 0, 0, 0),
                    argument_error);
    CHECK_THROWS_AS(rng::kappa4({rng::Dist::shifted_bernoulli, 0.0}), argument_error);
}
