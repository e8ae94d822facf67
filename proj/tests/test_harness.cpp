#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "wigner/errors.hpp"
#include "wigner/harness.hpp"
#include "wigner/rng.hpp"

using namespace wigner;
namespace hn = wigner::harness;

namespace {

hn::ExperimentConfig small_config(long N, long M) {
    hn::ExperimentConfig cfg;
    cfg.N = N;
    cfg.M = M;
    cfg.ens.beta = 1;
    cfg.ens.seed = 42;
    cfg.tf = spectral::bump().scaled(0.0, 0.5);
    return cfg;
}

double bump_g(double u) { return std::pow(1.0 - u * u, 3.0); }
double bump_g1(double u) { return -6.0 * u * std::pow(1.0 - u * u, 2.0); }
double bump_g2(double u) { return -6.0 + 36.0 * u * u - 30.0 * std::pow(u, 4.0); }

spectral::TestFunction scaled_bump(double amplitude) {
    return spectral::TestFunction(
        [amplitude](double u) { return amplitude * bump_g(u); },
        [amplitude](double u) { return amplitude * bump_g1(u); },
        [amplitude](double u) { return amplitude * bump_g2(u); }, -1.0, 1.0, 0.0, 0.5);
}

}  // namespace

TEST_CASE("moments: exact values on a tiny sample") {
    // x = {1, 2, 3, 4}: mean 2.5, unbiased variance 5/3, zero skew
    const std::vector<double> x{1, 2, 3, 4};
    const auto s = hn::moments(x);
    CHECK(s.count == 4);
    CHECK(s.mean == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(s.variance == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(s.skewness == doctest::Approx(0.0).epsilon(1e-15));
    // m4 = 2*(1.5^4 + 0.5^4)/4 = 2.5625, m2 = 1.25 -> kurt = 1.64 - 3
    CHECK(s.excess_kurtosis == doctest::Approx(2.5625 / (1.25 * 1.25) - 3.0).epsilon(1e-14));
    CHECK(s.se_mean == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-14));
    CHECK(s.se_variance == doctest::Approx((5.0 / 3.0) * std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS((void)hn::moments({1.0}), argument_error);
}

TEST_CASE("ks: statistic and p-value behavior") {
    // single sample at 0: D+ = 1 - Phi(0) = 0.5 and D- = Phi(0) = 0.5
    CHECK(hn::ks_statistic({0.0}) == doctest::Approx(0.5).epsilon(1e-15));

    // 10^4 keyed standard-normal draws pass at the 1% level
    std::vector<double> z(10000);
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = rng::normal(7, 0x6b73u, i);
    const auto good = hn::ks_normality(z);
    CHECK(good.p > 0.01);
    CHECK(good.D < 0.02);

    // a point mass far in the tail is rejected outright
    const std::vector<double> ten(100, 10.0);
    const auto bad = hn::ks_normality(ten);
    CHECK(bad.p < 1e-6);

    CHECK_THROWS_AS((void)hn::ks_normality({0.1, 0.2, -0.3, 0.4}), argument_error);
}

TEST_CASE("ks: Kolmogorov tail values") {
    CHECK(hn::kolmogorov_Q(0.0) == 1.0);
    // Q(t) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2); at t=1 the series gives 0.26999967...
    double ref = 0;
    for (int k = 1; k < 50; ++k)
        ref += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k);
    CHECK(hn::kolmogorov_Q(1.0) == doctest::Approx(ref).epsilon(1e-14));
    CHECK(hn::kolmogorov_Q(5.0) < 1e-20);
}

TEST_CASE("char function: lambda = 0 is exactly one") {
    std::vector<double> x(500);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = rng::normal(3, 0x6366u, i);
    const auto table = hn::char_function_check(x, 1.0, {0.0, 0.7});
    REQUIRE(table.size() == 2);
    CHECK(table[0].empirical.real() == 1.0);
    CHECK(table[0].empirical.imag() == 0.0);
    CHECK(table[0].se == 0.0);
    CHECK(table[0].theory == 1.0);
    // symmetric samples: imaginary part within 3 SE of zero
    CHECK(std::abs(table[1].empirical.imag()) <= 3.0 * table[1].se + 1e-12);
    CHECK(table[1].se > 0);
    CHECK(table[1].theory == doctest::Approx(std::exp(-0.5 * 0.49)).epsilon(1e-15));
}

TEST_CASE("run_experiment: rejects bad configurations") {
    auto cfg = small_config(64, 50);
    const auto S = prof::VarianceProfile::flat(64);
    CHECK_THROWS_AS((void)hn::run_experiment(cfg, S), argument_error);  // M < 100

    cfg.M = 100;
    const auto S_wrong = prof::VarianceProfile::flat(32);
    CHECK_THROWS_AS((void)hn::run_experiment(cfg, S_wrong), argument_error);

    // zero payload: V(f) = 0 -> configuration rejected
    auto zero = cfg;
    zero.tf = spectral::TestFunction([](double) { return 0.0; }, [](double) { return 0.0; },
                                     [](double) { return 0.0; }, -1.0, 1.0, 0.0, 0.5);
    CHECK_THROWS_AS((void)hn::run_experiment(zero, S), argument_error);
}

TEST_CASE("run_experiment: tiny variance sets the warning but still runs") {
    auto cfg = small_config(64, 100);
    cfg.tf = scaled_bump(1e-3);  // V scales as amplitude^2 ~ 3e-7
    const auto S = prof::VarianceProfile::flat(64);
    const auto r = hn::run_experiment(cfg, S);
    CHECK(!r.warning.empty());
    CHECK(r.prediction.variance > 0);
    CHECK(r.prediction.variance < 1e-3);
    CHECK(r.failures == 0);
}

TEST_CASE("run_experiment: deterministic across runs and thread counts") {
    auto cfg = small_config(80, 100);
    const auto S = prof::VarianceProfile::flat(80);

    const auto a = hn::run_experiment(cfg, S);
    const auto b = hn::run_experiment(cfg, S);
    REQUIRE(a.centered.size() == b.centered.size());
    for (std::size_t i = 0; i < a.centered.size(); ++i)
        CHECK(a.centered[i] == b.centered[i]);
    CHECK(a.stats.mean == b.stats.mean);
    CHECK(a.ks.D == b.ks.D);
    CHECK(a.ks.p == b.ks.p);

    auto cfg4 = cfg;
    cfg4.threads = 4;
    const auto c = hn::run_experiment(cfg4, S);
    REQUIRE(a.centered.size() == c.centered.size());
    for (std::size_t i = 0; i < a.centered.size(); ++i)
        CHECK(a.centered[i] == c.centered[i]);
    CHECK(a.stats.variance == c.stats.variance);
}

TEST_CASE("run_experiment: doubling g quadruples empirical variance and V(f)") {
    auto cfg = small_config(64, 120);
    cfg.tf = scaled_bump(1.0);
    const auto S = prof::VarianceProfile::flat(64);
    const auto base = hn::run_experiment(cfg, S);

    auto cfg2 = cfg;
    cfg2.tf = scaled_bump(2.0);
    const auto twice = hn::run_experiment(cfg2, S);

    CHECK(twice.stats.variance ==
          doctest::Approx(4.0 * base.stats.variance).epsilon(1e-12));
    CHECK(twice.prediction.variance ==
          doctest::Approx(4.0 * base.prediction.variance).epsilon(1e-10));
    // the standardized samples coincide, so the KS readout is scale-free
    CHECK(twice.ks.D == doctest::Approx(base.ks.D).epsilon(1e-10));
}

TEST_CASE("run_experiment: small bulk Monte Carlo is statistically sane") {
    auto cfg = small_config(200, 200);
    const auto S = prof::VarianceProfile::flat(200);
    const auto r = hn::run_experiment(cfg, S);
    CHECK(r.failures == 0);
    CHECK(r.warning.empty());
    CHECK(r.stats.count == 200);
    // loose desk-scale bands; the acceptance suite runs the tight ones
    CHECK(r.stats.variance / r.prediction.variance > 0.6);
    CHECK(r.stats.variance / r.prediction.variance < 1.4);
    CHECK(r.ks.p > 1e-4);
    CHECK(std::abs(r.stats.mean - r.prediction.bias) < 5.0 * r.stats.se_mean);
    REQUIRE(r.char_table.size() == 3);
    for (const auto& row : r.char_table) {
        if (row.lambda == 0.0) continue;
        CHECK(std::abs(row.empirical.real() - row.theory) <= 4.0 * row.se + 0.05);
    }
}

TEST_CASE("convergence_sweep: empty list and a two-point sweep") {
    auto cfg = small_config(0, 120);
    CHECK(hn::convergence_sweep(cfg, {}, prof::VarianceProfile::flat).empty());

    const auto rows = hn::convergence_sweep(cfg, {100, 200}, prof::VarianceProfile::flat);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].N == 100);
    CHECK(rows[1].N == 200);
    for (const auto& row : rows) {
        CHECK(row.var_ratio > 0.4);
        CHECK(row.var_ratio < 2.0);
        CHECK(row.ks_p >= 0.0);
        CHECK(row.ks_p <= 1.0);
        CHECK(std::isfinite(row.mean));
        CHECK(std::isfinite(row.bias_theory));
    }
}
