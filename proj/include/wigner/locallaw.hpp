#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wigner/profile.hpp"
#include "wigner/spectral.hpp"

namespace wigner::locallaw {

using cplx = std::complex<double>;

// One probe's law checks: each ratio is an observed deviation divided by its
// deterministic control parameter, so stochastic domination predicts O(1)
// values; pass when every ratio stays under the band.
struct LawReport {
    cplx z{}, zp{};  // zp == z for one-point checks
    std::map<std::string, double> ratios;
    double pass_band = 0;
    bool pass() const;
};

// default ceiling 5 * N^0.05: domination statements allow N^eps factors
double default_band(long N);

// first/middle/last coordinate vectors, the flat vector, and one seeded
// pseudo-random unit vector
std::vector<Eigen::VectorXd> default_test_vectors(int n, std::uint64_t seed);

// One-point resolvent laws at z in D': ratios
//   entrywise  max_ij |G_ij - delta_ij m| / Psi
//   average    |tr G / n - m| / Theta
//   strong     max_i |sum_j s_ij G_jj - m| / (rho Psi^2)
//   isotropic  max over ordered test-vector pairs |<v,Gw> - m<v,w>| / Psi
// rho_hint > 0 skips recomputing prof::rho(S, z) (it depends only on S, z).
LawReport check_resolvent_laws(const spectral::ResolventFactory& F,
                               const prof::VarianceProfile& S, cplx z,
                               const std::vector<Eigen::VectorXd>& test_vectors,
                               double band = 0, double rho_hint = 0);
LawReport check_resolvent_laws(const Eigen::MatrixXd& H, const prof::VarianceProfile& S,
                               cplx z, const std::vector<Eigen::VectorXd>& test_vectors,
                               double band = 0, double rho_hint = 0);

// two-point function T_ab = sum_{j != b} s_aj G_jb(z) G_jb(zp); real symmetric
// samples only (the trace identities below use the symmetry of G)
Eigen::MatrixXcd compute_T(const spectral::ResolventFactory& F,
                           const prof::VarianceProfile& S, cplx z, cplx zp);
Eigen::MatrixXcd compute_T(const Eigen::MatrixXd& H, const prof::VarianceProfile& S,
                           cplx z, cplx zp);

// Two-point laws at z, zp (or z, conj(zp)) in D': ratios
//   T_entrywise  ||T - T_theory||_sup / (|rho2| Xi2),  rho2 = (1 - m1 m2)^-1,
//                Xi2 = Psi1^1.5 Psi2 + Psi1 Psi2^1.5
//   T_trace      |Tr T - Tr T_theory| / (N (Psi1^1.5 Psi2 + Psi1 Psi2^1.5
//                                            + Theta1^2 + Theta1 Theta2))
//   P_recursion  ||-T/m1 + m2 S T + m1 m2^2 S^2||_sup / Xi2
LawReport check_T_laws(const spectral::ResolventFactory& F, const prof::VarianceProfile& S,
                       cplx z, cplx zp, double band = 0);
LawReport check_T_laws(const Eigen::MatrixXd& H, const prof::VarianceProfile& S,
                       cplx z, cplx zp, double band = 0);

struct TraceIdentityReport {
    cplx z{}, zp{};
    bool two_point = true;  // false when the z = zp branch was taken
    double deviation = 0;   // |Tr(Pi T) - closed form|
    double scale = 0;       // (Theta(z) + Theta(zp)) / |Im z|
    double ratio = 0;       // deviation / scale
};

// Tr(Pi T) = (1/N) sum_{b, j != b} G_jb(z) G_jb(zp) against its closed form:
// (m1 - m2)/(z - zp) - m1 m2, or m' - m^2 on the z = zp branch (taken
// automatically when |z - zp| < 1e-12). S-free: column sums of any valid
// profile are exactly 1, so the weights drop out.
TraceIdentityReport check_trace_identities(const spectral::ResolventFactory& F,
                                           cplx z, cplx zp);
TraceIdentityReport check_trace_identities(const Eigen::MatrixXd& H, cplx z, cplx zp);

// deterministic identity Tr(m1^2 m2^2 Pi (1 - m1 m2 S)^-1) = m1^2 m2^2/(1 - m1 m2);
// returns the absolute residual (rounding-level for any valid profile)
double t1_residual(const prof::VarianceProfile& S, cplx z, cplx zp);

// E in {-1.5, -0.5, 0, 0.5, 1.5} x eta in {N^-0.3, N^-0.5, N^-0.7}, kept in D'
std::vector<cplx> probe_grid(long N);

// CSV emission: one row per (N, seed, z, zp, check, ratio, band, pass)
std::string csv_header();
void append_csv(std::string& out, long N, std::uint64_t seed, const LawReport& rep);

}  // namespace wigner::locallaw
