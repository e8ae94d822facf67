#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "wigner/ensemble.hpp"
#include "wigner/profile.hpp"
#include "wigner/spectral.hpp"
#include "wigner/theory.hpp"

namespace wigner::harness {

struct ExperimentConfig {
    long N = 400;
    long M = 2000;  // at least 100
    ensemble::EnsembleSpec ens{};
    spectral::TestFunction tf = spectral::bump();
    double tau = 0;   // 0: contour default min(0.05, c0/32)
    int threads = 1;  // sample-level parallelism; results independent of it
    std::string out_dir;  // artifact directory, used by the cli layer
    std::vector<double> lambdas{0.5, 1.0, 2.0};
};

struct MomentSummary {
    long count = 0;
    double mean = 0, variance = 0, skewness = 0, excess_kurtosis = 0;
    // gaussian-approximation standard errors
    double se_mean = 0, se_variance = 0, se_skewness = 0, se_kurtosis = 0;
};

MomentSummary moments(const std::vector<double>& x);

struct KsResult {
    double D = 0, p = 0;
};

// one-sample Kolmogorov-Smirnov against the standard normal; needs >= 5 samples
KsResult ks_normality(const std::vector<double>& samples);
// the bare statistic, no size gate (D = 0.5 for the single sample {0})
double ks_statistic(std::vector<double> samples);
// asymptotic Kolmogorov tail Q(t) = 2 sum_k (-1)^{k-1} exp(-2 k^2 t^2)
double kolmogorov_Q(double t);

struct CharRow {
    double lambda = 0;
    std::complex<double> empirical{};  // mean of exp(i lambda x)
    double se = 0;                     // sqrt((var cos + var sin)/M)
    double theory = 0;                 // exp(-lambda^2 V/2)
};

// empirical characteristic function of centered samples against the
// gaussian-limit prediction exp(-lambda^2 Vf / 2)
std::vector<CharRow> char_function_check(const std::vector<double>& samples, double Vf,
                                         const std::vector<double>& lambdas);

struct ExperimentResult {
    std::vector<double> centered;  // per-sample centered statistics, index order
    std::vector<long> indices;     // original sample indices of kept entries
    long failures = 0;             // excluded samples (eigensolver errors)
    MomentSummary stats;
    theory::TheoryPrediction prediction{};  // V(f), B(f), k4, tau, quadrature est
    KsResult ks{};                          // on (x - mean)/sqrt(V theory)
    std::vector<CharRow> char_table;
    std::string warning;  // set when V(f) < 1e-3
};

// M keyed samples -> centered statistics -> moments, KS against the CLT
// (standardized by the theory V(f)), and the characteristic-function table;
// deterministic for fixed config regardless of thread count
ExperimentResult run_experiment(const ExperimentConfig& cfg, const prof::VarianceProfile& S);

struct SweepRow {
    long N = 0;
    double var_ratio = 0;  // empirical variance / V(f)
    double ks_p = 0;
    double mean = 0;         // empirical mean of centered statistics
    double bias_theory = 0;  // B(f) at this N
};

// rerun the base experiment across sizes; the profile is rebuilt per N
std::vector<SweepRow> convergence_sweep(
    ExperimentConfig base, const std::vector<long>& Ns,
    const std::function<prof::VarianceProfile(long)>& make_profile);

}  // namespace wigner::harness
