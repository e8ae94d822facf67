#include "wigner/semicircle.hpp"

#include <cmath>

#include "wigner/errors.hpp"

namespace wigner::sc {

cplx stieltjes(cplx z, int order) {
    if (z.imag() == 0.0) throw domain_error("stieltjes: z must be off the real axis");
    if (order < 0 || order > 2) throw argument_error("stieltjes: order must be in {0,1,2}");
    // both roots of m^2 + z m + 1 = 0; exactly one has Im m * Im z > 0
    // (the roots multiply to 1, so their imaginary parts have opposite signs)
    const cplx r = std::sqrt(z * z - 4.0);
    cplx m = 0.5 * (-z + r);
    if (m.imag() * z.imag() <= 0.0) m = 0.5 * (-z - r);
    if (order == 0) return m;
    const cplx d = 1.0 - m * m;
    const cplx mp = m * m / d;
    if (order == 1) return mp;
    return 2.0 * m * mp / (d * d);
}

double density(double E) {
    const double t = 4.0 - E * E;
    return t > 0.0 ? std::sqrt(t) / (2.0 * M_PI) : 0.0;
}

double kappa(double E) { return std::min(std::abs(E - 2.0), std::abs(E + 2.0)); }

ControlParams control_params(cplx z, long N) {
    if (z.imag() == 0.0) throw domain_error("control_params: z must be off the real axis");
    if (N <= 0) throw argument_error("control_params: N must be positive");
    const double eta = std::abs(z.imag());
    const double immu = std::abs(stieltjes(z).imag());  // = Im m on the upper half plane
    const double theta = 1.0 / (N * eta);
    return {std::sqrt(immu / (N * eta)) + theta, theta};
}

bool in_domain_D(cplx z) {
    const double eta = std::abs(z.imag());
    return std::abs(z.real()) <= 5.0 && eta > 0.0 && eta <= 10.0;
}

bool in_domain_Dprime(cplx z, long N, double delta0) {
    return in_domain_D(z) && std::abs(z.imag()) >= std::pow(double(N), -1.0 + delta0);
}

}  // namespace wigner::sc
