#include "wigner/rng.hpp"

#include <cmath>

#include "wigner/errors.hpp"

namespace wigner::rng {

namespace {
constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
}  // namespace

std::uint64_t philox(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t c0 = counter, c1 = stream, key = seed;
    for (int r = 0; r < 10; ++r) {
        const unsigned __int128 prod = (unsigned __int128)c0 * kMul;
        const std::uint64_t hi = (std::uint64_t)(prod >> 64);
        const std::uint64_t lo = (std::uint64_t)prod;
        c0 = hi ^ key ^ c1;
        c1 = lo;
        key += kWeyl;
    }
    return c0;
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    // 53 high bits -> [0,1), plus half an ulp to stay inside (0,1)
    return (philox(seed, stream, counter) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double ppnd16(double p) {
    // Wichura, Applied Statistics 37 (1988), algorithm AS 241 (PPND16)
    if (!(p > 0.0 && p < 1.0)) throw argument_error("ppnd16: p must be in (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -x : x;
}

double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return ppnd16(uniform01(seed, stream, counter));
}

double draw(const DistSpec& d, std::uint64_t seed, std::uint64_t stream,
            std::uint64_t counter) {
    const double u = uniform01(seed, stream, counter);
    switch (d.tag) {
        case Dist::gaussian:
            return ppnd16(u);
        case Dist::rademacher:
            return u < 0.5 ? -1.0 : 1.0;
        case Dist::shifted_bernoulli: {
            const double p = d.p;
            if (!(p > 0.0 && p < 1.0))
                throw argument_error("shifted_bernoulli: p must be in (0,1)");
            return u < 1.0 - p ? -std::sqrt(p / (1.0 - p)) : std::sqrt((1.0 - p) / p);
        }
        case Dist::uniform:
            return (u - 0.5) * std::sqrt(12.0);
    }
    throw argument_error("draw: unsupported distribution tag");
}

double kappa4(const DistSpec& d) {
    switch (d.tag) {
        case Dist::gaussian:
            return 0.0;
        case Dist::rademacher:
            return -2.0;
        case Dist::shifted_bernoulli: {
            const double p = d.p;
            if (!(p > 0.0 && p < 1.0))
                throw argument_error("shifted_bernoulli: p must be in (0,1)");
            return (1.0 - 6.0 * p * (1.0 - p)) / (p * (1.0 - p));
        }
        case Dist::uniform:
            return -6.0 / 5.0;
    }
    throw argument_error("kappa4: unsupported distribution tag");
}

DistSpec parse_dist(const std::string& name, double p) {
    if (name == "gaussian") return {Dist::gaussian, p};
    if (name == "rademacher") return {Dist::rademacher, p};
    if (name == "shifted_bernoulli") return {Dist::shifted_bernoulli, p};
    if (name == "uniform") return {Dist::uniform, p};
    throw argument_error("unknown distribution: " + name);
}

std::string dist_name(const DistSpec& d) {
    switch (d.tag) {
        case Dist::gaussian: return "gaussian";
        case Dist::rademacher: return "rademacher";
        case Dist::shifted_bernoulli: return "shifted_bernoulli";
        case Dist::uniform: return "uniform";
    }
    return "?";
}

}  // namespace wigner::rng
