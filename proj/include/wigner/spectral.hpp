#pragma once

#include <Eigen/Core>
#include <complex>

#include "wigner/ensemble.hpp"
#include "wigner/test_function.hpp"

namespace wigner::spectral {

struct SpectralSample {
    Eigen::VectorXd eigenvalues;  // ascending
    ensemble::EnsembleSpec provenance{};
    long sample_index = -1;
    int n() const { return static_cast<int>(eigenvalues.size()); }
};

// dense Hermitian eigenvalues, ascending; throws argument_error if the input
// deviates from Hermitian by more than 1e-12 in sup norm
Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& H);
Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& H);

// sample the ensemble at the given index and diagonalize
SpectralSample make_sample(const ensemble::EnsembleSpec& spec,
                           const prof::VarianceProfile& S, long index);

// G(z) = (H - z)^{-1}; throws domain_error for real z
Eigen::MatrixXcd resolvent(const Eigen::MatrixXd& H, std::complex<double> z);
Eigen::MatrixXcd resolvent(const Eigen::MatrixXcd& H, std::complex<double> z);

// one eigendecomposition, many resolvents: G(z) = V diag((w - z)^{-1}) V^H
class ResolventFactory {
  public:
    explicit ResolventFactory(const Eigen::MatrixXd& H);
    explicit ResolventFactory(const Eigen::MatrixXcd& H);
    Eigen::MatrixXcd at(std::complex<double> z) const;
    std::complex<double> trace(std::complex<double> z) const;
    const Eigen::VectorXd& eigs() const { return w_; }

  private:
    Eigen::VectorXd w_;
    Eigen::MatrixXcd V_;  // complex eigenvectors (Hermitian input)
    Eigen::MatrixXd Vr_;  // real eigenvectors (symmetric input); V_ empty then
};

struct CenteredStat {
    double raw;             // sum_i g((lambda_i - E0)/eta0)
    double centered;        // raw - sc_expectation
    double sc_expectation;  // n * int f(x) rho_sc(x) dx over supp f cap [-2,2]
};
CenteredStat centered_statistic(const SpectralSample& sample, const TestFunction& tf);

// distance from the scaled support of tf to the nearest edge of {-2, 2}
double kappa0(const TestFunction& tf);

// Helffer-Sjostrand cross-check parameters: chi(y) = 1 for |y| <= chi_flat*eta0,
// quintic ramp down to 0 at chi_end*eta0; strip |y| < y_min excluded
struct HsParams {
    double y_min = 1e-4;
    double chi_flat = 1.0;
    double chi_end = 2.0;
    int order = 10;       // GL nodes per panel and direction
    double rel_tol = 1e-3;
};

// (1/pi) Int dbar(ftilde)(z) Tr G(z) d^2z on a tensor grid; n <= 500
double trace_f_hs(const Eigen::MatrixXd& H, const TestFunction& tf,
                  const HsParams& hs = {});

}  // namespace wigner::spectral
