#pragma once
#include <Eigen/Dense>
#include <cstdint>

#include "wigner/profile.hpp"
#include "wigner/rng.hpp"

namespace wigner::ensemble {

struct EnsembleSpec {
    int beta = 1;  // 1: real symmetric, 2: complex Hermitian
    rng::DistSpec dist{};       // off-diagonal entry distribution (standardized)
    rng::DistSpec diag_dist{};  // diagonal distribution (defaults to dist)
    std::uint64_t seed = 0;
};

// real symmetric draw: H_ij = sqrt(s_ij) * x_ij, x upper-triangle iid
Eigen::MatrixXd sample_real(const EnsembleSpec& spec, const prof::VarianceProfile& S,
                            std::uint64_t sample_index);

// complex Hermitian draw: off-diagonal entries have independent real and
// imaginary parts of variance s_ij/2 each (E H_ij^2 = 0); diagonal real with
// variance s_ii
Eigen::MatrixXcd sample_complex(const EnsembleSpec& spec, const prof::VarianceProfile& S,
                                std::uint64_t sample_index);

// the value sample would place at (i,j), without materializing the matrix
// (keyed RNG makes every entry addressable); for beta=2 returns the complex entry
std::complex<double> entry_value(const EnsembleSpec& spec, const prof::VarianceProfile& S,
                                 std::uint64_t sample_index, int i, int j);

// k4 = sum of fourth cumulants of all entries (both real and imaginary parts
// for beta=2), computed analytically from the profile
double fourth_cumulant_sum(const EnsembleSpec& spec, const prof::VarianceProfile& S);

}  // namespace wigner::ensemble
