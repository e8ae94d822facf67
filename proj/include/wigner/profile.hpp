#pragma once
#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace wigner::prof {

using cplx = std::complex<double>;

// symmetric doubly stochastic variance profile S with flatness constants and
// eagerly computed spectral data
class VarianceProfile {
  public:
    struct Spectral {
        Eigen::VectorXd eigenvalues;  // sorted descending
        double gap_plus = 0, gap_minus = 0;
        // eigenvalues grouped within 1e-12: (value, multiplicity); lets trace
        // functionals over contour node pairs run in O(#clusters)
        std::vector<std::pair<double, int>> clusters;
    };

    static VarianceProfile flat(int n);
    static VarianceProfile from_kernel(int n,
                                       const std::function<double(double, double)>& kernel,
                                       double sinkhorn_tol = 1e-13,
                                       int max_iter = 100000);
    // stores the matrix as given (validity checked by validate(), not here)
    static VarianceProfile from_matrix(Eigen::MatrixXd s);

    int n() const { return int(s_.rows()); }
    const Eigen::MatrixXd& s() const { return s_; }
    double c_inf() const { return c_inf_; }
    double c_sup() const { return c_sup_; }
    double trace() const { return s_.trace(); }
    double sum_s_squared() const { return s_.squaredNorm(); }
    const Spectral& spectral_data() const { return spec_; }

  private:
    explicit VarianceProfile(Eigen::MatrixXd s);
    Eigen::MatrixXd s_;
    double c_inf_ = 0, c_sup_ = 0;
    Spectral spec_;
};

struct ValidationReport {
    double max_row_dev = 0;   // max_i |sum_j s_ij - 1|
    double asymmetry = 0;     // max_ij |s_ij - s_ji|
    double min_entry = 0;
    double c_inf = 0, c_sup = 0;
    bool rows_ok = false, symmetric_ok = false, flat_ok = false;
    bool pass() const { return rows_ok && symmetric_ok && flat_ok; }
};

ValidationReport validate(const VarianceProfile& S);

enum class TraceKind { variance, bias, t_trace };

// Tr of the theorem trace functionals, by LU solves against (1 - m1 m2 S)
// (variance kind: two successive solves realize the squared inverse):
//   variance: m1' m2' Tr[ S (1 - m1 m2 S)^-2 ]
//   bias:     m' m^3  Tr[ S^2 (1 - m^2 S)^-1 ]      (zp ignored)
//   t_trace:  m1^2 m2^2 Tr[ S^2 (1 - m1 m2 S)^-1 ]
cplx kernel_trace(const VarianceProfile& S, cplx z, cplx zp, TraceKind kind);

// same values via the eigenvalue path (test oracle / fast path)
cplx kernel_trace_eigen(const VarianceProfile& S, cplx z, cplx zp, TraceKind kind);

// deterministic limit of the two-point function: (m1^2 m2^2 S^2)(1 - m1 m2 S)^-1
Eigen::MatrixXcd t_theory_matrix(const VarianceProfile& S, cplx z, cplx zp);

struct StabilityReport {
    double gap_plus = 0, gap_minus = 0;
    double norm_ratio = 0;      // ||(1 - m1 m2 S)^-1||_inf * |1 - m1 m2|
    double projected_norm = 0;  // ||(1 - Pi)(1 - m1 m2 S)^-1||_inf
    double rho = 0;             // ||(1 - m(z)^2 S)^-1||_inf  (>= 1/2)
};

StabilityReport stability_report(const VarianceProfile& S, cplx z, cplx zp);

// ||(1 - m(z)^2 S)^-1||_inf, the stability factor of the local laws
double rho(const VarianceProfile& S, cplx z);
// two-point stability factor ||(1 - m(z) m(zp) S)^-1||_inf
double rho2(const VarianceProfile& S, cplx z, cplx zp);

}  // namespace wigner::prof
