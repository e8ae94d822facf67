#pragma once
#include <complex>

namespace wigner::sc {

using cplx = std::complex<double>;

// Stieltjes transform of the semicircle law and its first two derivatives.
// order 0: m(z) with Im m * Im z > 0; order 1: m' = m^2/(1-m^2);
// order 2: m'' = 2 m m' / (1-m^2)^2.
cplx stieltjes(cplx z, int order = 0);

// semicircle density (1/2pi) sqrt(4-E^2) on [-2,2]
double density(double E);

// distance to the nearest spectral edge
double kappa(double E);

struct ControlParams {
    double psi, theta;
};

// Psi = sqrt(Im m / (N|eta|)) + 1/(N|eta|) (upper-half-plane Im), Theta = 1/(N|eta|)
ControlParams control_params(cplx z, long N);

// spectral rectangle |E| <= 5, 0 < |eta| <= 10 (conjugate-symmetric reading)
bool in_domain_D(cplx z);
// D' = D with |eta| >= N^{-1+delta0}
bool in_domain_Dprime(cplx z, long N, double delta0 = 0.01);

}  // namespace wigner::sc
