#pragma once
#include <cstdint>
#include <string>

namespace wigner::rng {

// Counter-based generator (Philox-2x64-10): value = f(seed, stream, counter).
// Any (sample, entry) address can be generated independently in any order, so
// parallel sampling is bitwise identical to serial.
std::uint64_t philox(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// uniform on (0,1), strictly excluding the endpoints
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// inverse standard-normal CDF (Wichura's AS241, double precision)
double ppnd16(double p);

// standard normal via inverse CDF of uniform01
double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

enum class Dist { gaussian, rademacher, shifted_bernoulli, uniform };

struct DistSpec {
    Dist tag = Dist::gaussian;
    double p = 0.5;  // shifted_bernoulli parameter
};

// one standardized draw (mean 0, variance 1) from the keyed stream; all
// distributions are inverse-CDF maps of the same uniform, so ensembles with
// the same seed are coupled draw-by-draw
double draw(const DistSpec& d, std::uint64_t seed, std::uint64_t stream,
            std::uint64_t counter);

// fourth cumulant of the standardized distribution
double kappa4(const DistSpec& d);

DistSpec parse_dist(const std::string& name, double p = 0.5);
std::string dist_name(const DistSpec& d);

}  // namespace wigner::rng
