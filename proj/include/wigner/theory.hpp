#pragma once

#include <complex>
#include <functional>

#include "wigner/profile.hpp"
#include "wigner/test_function.hpp"

namespace wigner::theory {

using cd = std::complex<double>;

// Contour configuration for the variance/bias quadrature. The two contours
// sit at heights h_k = eta0 * N^{-tau} / k inside the chi == 1 strip.
struct ContourSpec {
    double tau = 0;
    double eta0 = 0;
    long N = 0;
    double h1 = 0, h2 = 0;       // nominal heights, k = 1, 2
    double x_lo = 0, x_hi = 0;   // scaled support padded by one eta0
    int order = 10;              // GL nodes per panel per branch
    double kappa0 = 0;
    double c0 = 0;

    // tau <= 0 selects the default min(0.05, c0/32); tau >= c0/16 is rejected
    static ContourSpec for_config(const spectral::TestFunction& tf, long N,
                                  double tau = 0, int order = 10);
};

// (f(x) + i y f'(x)) chi(y) with chi = 1 on |y|<=1, C^2 ramp to 0 on 1<=|y|<=2
cd almost_analytic(const spectral::TestFunction& tf, cd z);

struct TheoryPrediction {
    double variance = 0;
    double bias = 0;
    double k4_used = 0;
    double tau = 0;
    double quadrature_error_estimate = 0;
};

// trace kernels against S, parametrized by precomputed m-values so callers
// can swap in closed forms; built from a profile via its eigenvalue clusters
struct TraceKernels {
    // Tr( m1' m2' S (1 - m1 m2 S)^{-2} )
    std::function<cd(cd m1, cd mp1, cd m2, cd mp2)> variance_trace;
    // Tr( m' m^3 S^2 (1 - m^2 S)^{-1} )
    std::function<cd(cd m, cd mp)> bias_trace;
    double trace_S = 1;
};

TraceKernels kernels_from_profile(const prof::VarianceProfile& S);
TraceKernels kernels_rank_one();  // closed forms for the flat profile

// V(f) = -(1/4pi^2) II f~(z) f~(z') { (2/beta) T_var + 2 k4 m1 m1' m2 m2'
//        + Tr S (1 - 2/beta) m1' m2' } dz dz', extrapolated to vanishing
// contour height through the ladder h1/eta0 in {0.2, 0.1, 0.05}
double variance_Vf(const spectral::TestFunction& tf, const TraceKernels& K,
                   int beta, double k4, const ContourSpec& contour,
                   double* err_estimate = nullptr);
double variance_Vf(const spectral::TestFunction& tf, const prof::VarianceProfile& S,
                   int beta, double k4, const ContourSpec& contour,
                   double* err_estimate = nullptr);

// B(f) = (1/2pi i) I f~(z) { (2/beta - 1) T_bias + k4 m' m^3 } dz on the same
// ladder; the traversal direction is fixed so that the edge regime approaches
// +(2/beta - 1) g(0)/4, the sign simulations reproduce
double bias_Bf(const spectral::TestFunction& tf, const TraceKernels& K,
               int beta, double k4, const ContourSpec& contour,
               double* err_estimate = nullptr);
double bias_Bf(const spectral::TestFunction& tf, const prof::VarianceProfile& S,
               int beta, double k4, const ContourSpec& contour,
               double* err_estimate = nullptr);

TheoryPrediction predict(const spectral::TestFunction& tf, const prof::VarianceProfile& S,
                         int beta, double k4, const ContourSpec& contour);

// universal mesoscopic limits of the payload g (scaling drops out)
// bulk: (1/beta pi) int |xi| |ghat(xi)|^2 dxi
double bulk_limit(const spectral::TestFunction& g, int beta);

struct EdgeLimit {
    double mean;      // (2/beta - 1) g(0) / 4
    double variance;  // (1/2 beta pi) int |xi| |hhat(xi)|^2 dxi
};
// side = +2 uses h(x) = g(-x^2); side = -2 uses h(x) = g(+x^2)
EdgeLimit edge_limit(const spectral::TestFunction& g, int beta, int side);

}  // namespace wigner::theory
