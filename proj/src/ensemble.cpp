#include "wigner/ensemble.hpp"

#include <cmath>

#include "wigner/errors.hpp"

namespace wigner::ensemble {

namespace {

// entry address: two counters per upper-triangle slot (real and imaginary draws)
inline std::uint64_t slot(int n, int i, int j) {
    return 2 * (std::uint64_t(i) * n + std::uint64_t(j));
}

void check_spec(const EnsembleSpec& spec) {
    if (spec.beta != 1 && spec.beta != 2)
        throw argument_error("EnsembleSpec: beta must be 1 or 2");
}

}  // namespace

Eigen::MatrixXd sample_real(const EnsembleSpec& spec, const prof::VarianceProfile& S,
                            std::uint64_t sample_index) {
    check_spec(spec);
    const int n = S.n();
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double x = rng::draw(i == j ? spec.diag_dist : spec.dist, spec.seed,
                                       sample_index, slot(n, i, j));
            H(i, j) = H(j, i) = std::sqrt(S.s()(i, j)) * x;
        }
    return H;
}

Eigen::MatrixXcd sample_complex(const EnsembleSpec& spec, const prof::VarianceProfile& S,
                                std::uint64_t sample_index) {
    check_spec(spec);
    const int n = S.n();
    Eigen::MatrixXcd H(n, n);
    for (int i = 0; i < n; ++i) {
        H(i, i) = std::sqrt(S.s()(i, i)) *
                  rng::draw(spec.diag_dist, spec.seed, sample_index, slot(n, i, i));
        for (int j = i + 1; j < n; ++j) {
            const std::uint64_t c = slot(n, i, j);
            const double sc2 = std::sqrt(S.s()(i, j) / 2.0);
            const std::complex<double> v(
                sc2 * rng::draw(spec.dist, spec.seed, sample_index, c),
                sc2 * rng::draw(spec.dist, spec.seed, sample_index, c + 1));
            H(i, j) = v;
            H(j, i) = std::conj(v);
        }
    }
    return H;
}

std::complex<double> entry_value(const EnsembleSpec& spec, const prof::VarianceProfile& S,
                                 std::uint64_t sample_index, int i, int j) {
    check_spec(spec);
    if (i > j) return std::conj(entry_value(spec, S, sample_index, j, i));
    const int n = S.n();
    const std::uint64_t c = slot(n, i, j);
    if (spec.beta == 1 || i == j) {
        const double x = rng::draw(i == j ? spec.diag_dist : spec.dist, spec.seed,
                                   sample_index, c);
        return std::sqrt(S.s()(i, j)) * x;
    }
    const double sc2 = std::sqrt(S.s()(i, j) / 2.0);
    return {sc2 * rng::draw(spec.dist, spec.seed, sample_index, c),
            sc2 * rng::draw(spec.dist, spec.seed, sample_index, c + 1)};
}

double fourth_cumulant_sum(const EnsembleSpec& spec, const prof::VarianceProfile& S) {
    check_spec(spec);
    const double diag2 = S.s().diagonal().squaredNorm();
    const double off2 = S.sum_s_squared() - diag2;
    const double k_off = rng::kappa4(spec.dist);
    const double k_diag = rng::kappa4(spec.diag_dist);
    // beta=1: each entry contributes kappa4 * s_ij^2;
    // beta=2: Re and Im parts contribute kappa4 * (s_ij/2)^2 each off the
    // diagonal, the (real) diagonal contributes kappa4 * s_ii^2
    if (spec.beta == 1) return k_off * off2 + k_diag * diag2;
    return k_off * off2 / 2.0 + k_diag * diag2;
}

}  // namespace wigner::ensemble
