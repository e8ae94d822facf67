#include "wigner/profile.hpp"

#include <cmath>

#include "wigner/errors.hpp"
#include "wigner/lapack.hpp"
#include "wigner/semicircle.hpp"

namespace wigner::prof {

VarianceProfile::VarianceProfile(Eigen::MatrixXd s) : s_(std::move(s)) {
    const int n = int(s_.rows());
    if (n < 1 || s_.cols() != n) throw argument_error("VarianceProfile: square matrix required");
    c_inf_ = n * s_.minCoeff();
    c_sup_ = n * s_.maxCoeff();
    Eigen::VectorXd w = la::eigh_values(s_);  // ascending
    spec_.eigenvalues = w.reverse();
    spec_.gap_plus = n > 1 ? spec_.eigenvalues[0] - spec_.eigenvalues[1] : 2.0;
    spec_.gap_minus = 1.0 + spec_.eigenvalues[n - 1];
    for (int i = 0; i < n; ++i) {
        const double v = spec_.eigenvalues[i];
        if (!spec_.clusters.empty() && std::abs(spec_.clusters.back().first - v) <= 1e-12)
            ++spec_.clusters.back().second;
        else
            spec_.clusters.emplace_back(v, 1);
    }
}

VarianceProfile VarianceProfile::flat(int n) {
    if (n < 1) throw argument_error("flat: n must be >= 1");
    return VarianceProfile(Eigen::MatrixXd::Constant(n, n, 1.0 / n));
}

VarianceProfile VarianceProfile::from_kernel(
    int n, const std::function<double(double, double)>& kernel, double sinkhorn_tol,
    int max_iter) {
    if (n < 1) throw argument_error("from_kernel: n must be >= 1");
    Eigen::MatrixXd s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = kernel((i + 1.0) / n, (j + 1.0) / n);
            if (!(v > 0.0))
                throw argument_error("from_kernel: kernel must be positive on the grid");
            s(i, j) = s(j, i) = v / n;
        }
    // symmetric Sinkhorn: d S d with d = 1/sqrt(row sums), preserves symmetry
    Eigen::VectorXd r(n);
    int it = 0;
    for (;; ++it) {
        r = s.rowwise().sum();
        if ((r.array() - 1.0).abs().maxCoeff() < sinkhorn_tol) break;
        if (it >= max_iter) throw numeric_error("from_kernel: Sinkhorn did not converge");
        const Eigen::VectorXd d = r.array().rsqrt();
        s = d.asDiagonal() * s * d.asDiagonal();
    }
    // final symmetric correction making row sums exactly 1:
    // add C_ij = (e_i + e_j)/n - sum(e)/n^2 with e = 1 - rowsum
    r = s.rowwise().sum();
    const Eigen::VectorXd e = Eigen::VectorXd::Ones(n) - r;
    const double esum = e.sum();
    s += (e.replicate(1, n) + e.transpose().replicate(n, 1)) / n -
         Eigen::MatrixXd::Constant(n, n, esum / (n * double(n)));
    return VarianceProfile(std::move(s));
}

VarianceProfile VarianceProfile::from_matrix(Eigen::MatrixXd s) {
    return VarianceProfile(std::move(s));
}

ValidationReport validate(const VarianceProfile& S) {
    const auto& s = S.s();
    ValidationReport rep;
    rep.max_row_dev = (s.rowwise().sum().array() - 1.0).abs().maxCoeff();
    rep.asymmetry = (s - s.transpose()).cwiseAbs().maxCoeff();
    rep.min_entry = s.minCoeff();
    rep.c_inf = S.c_inf();
    rep.c_sup = S.c_sup();
    rep.rows_ok = rep.max_row_dev <= 1e-12;
    rep.symmetric_ok = rep.asymmetry <= 1e-14;
    rep.flat_ok = rep.c_inf > 0.0;
    return rep;
}

namespace {

void check_offaxis(cplx z, cplx zp) {
    if (z.imag() == 0.0 || zp.imag() == 0.0)
        throw domain_error("kernel_trace: z, zp must be off the real axis");
}

// near-singularity guard: |1 - w * lambda_top(S)|
void check_singular(const VarianceProfile& S, cplx w) {
    if (std::abs(1.0 - w * S.spectral_data().eigenvalues[0]) < 1e-14)
        throw numeric_error("kernel_trace: 1 - m1 m2 S is numerically singular");
}

}  // namespace

cplx kernel_trace(const VarianceProfile& S, cplx z, cplx zp, TraceKind kind) {
    check_offaxis(z, zp);
    const int n = S.n();
    const cplx m1 = sc::stieltjes(z);
    const cplx m2 = kind == TraceKind::bias ? m1 : sc::stieltjes(zp);
    const cplx w = m1 * m2;
    check_singular(S, w);
    Eigen::MatrixXcd A = -w * S.s();
    A.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    switch (kind) {
        case TraceKind::variance: {
            // two successive solves realize S (1 - m1 m2 S)^-2
            Eigen::MatrixXcd X = lu.solve(S.s().cast<cplx>());
            X = lu.solve(X);
            return sc::stieltjes(z, 1) * sc::stieltjes(zp, 1) * X.trace();
        }
        case TraceKind::bias: {
            const Eigen::MatrixXcd s2 = (S.s() * S.s()).cast<cplx>();
            return sc::stieltjes(z, 1) * m1 * m1 * m1 * lu.solve(s2).trace();
        }
        case TraceKind::t_trace: {
            const Eigen::MatrixXcd s2 = (S.s() * S.s()).cast<cplx>();
            return m1 * m1 * m2 * m2 * lu.solve(s2).trace();
        }
    }
    throw argument_error("kernel_trace: unknown kind");
}

cplx kernel_trace_eigen(const VarianceProfile& S, cplx z, cplx zp, TraceKind kind) {
    check_offaxis(z, zp);
    const cplx m1 = sc::stieltjes(z);
    const cplx m2 = kind == TraceKind::bias ? m1 : sc::stieltjes(zp);
    const cplx w = m1 * m2;
    check_singular(S, w);
    cplx acc = 0;
    for (const auto& [lam, mult] : S.spectral_data().clusters) {
        const cplx d = 1.0 - w * lam;
        switch (kind) {
            case TraceKind::variance: acc += double(mult) * lam / (d * d); break;
            case TraceKind::bias:
            case TraceKind::t_trace: acc += double(mult) * lam * lam / d; break;
        }
    }
    switch (kind) {
        case TraceKind::variance:
            return sc::stieltjes(z, 1) * sc::stieltjes(zp, 1) * acc;
        case TraceKind::bias:
            return sc::stieltjes(z, 1) * m1 * m1 * m1 * acc;
        case TraceKind::t_trace:
            return m1 * m1 * m2 * m2 * acc;
    }
    throw argument_error("kernel_trace_eigen: unknown kind");
}

Eigen::MatrixXcd t_theory_matrix(const VarianceProfile& S, cplx z, cplx zp) {
    check_offaxis(z, zp);
    const cplx m1 = sc::stieltjes(z), m2 = sc::stieltjes(zp);
    const cplx w = m1 * m2;
    check_singular(S, w);
    Eigen::MatrixXcd A = -w * S.s();
    A.diagonal().array() += 1.0;
    const Eigen::MatrixXcd s2 = (S.s() * S.s()).cast<cplx>();
    // S^2 commutes with (1 - m1 m2 S)^-1, so solving A X = S^2 gives the product
    return m1 * m1 * m2 * m2 * Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(s2);
}

namespace {

double inf_norm(const Eigen::MatrixXcd& M) {
    return M.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

double rho(const VarianceProfile& S, cplx z) {
    const cplx m = sc::stieltjes(z);
    const int n = S.n();
    if (S.c_sup() - S.c_inf() < 1e-13) {
        // flat profile: S = J/n is a projection, so (1 - m^2 S)^-1 = 1 + aS
        const cplx a = m * m / (1.0 - m * m);
        return std::abs(1.0 + a / double(n)) + (n - 1) * std::abs(a) / double(n);
    }
    Eigen::MatrixXcd A = -m * m * S.s();
    A.diagonal().array() += 1.0;
    return inf_norm(Eigen::PartialPivLU<Eigen::MatrixXcd>(A).inverse());
}

double rho2(const VarianceProfile& S, cplx z, cplx zp) {
    const cplx w = sc::stieltjes(z) * sc::stieltjes(zp);
    Eigen::MatrixXcd A = -w * S.s();
    A.diagonal().array() += 1.0;
    return inf_norm(Eigen::PartialPivLU<Eigen::MatrixXcd>(A).inverse());
}

StabilityReport stability_report(const VarianceProfile& S, cplx z, cplx zp) {
    if (!sc::in_domain_D(z) || !sc::in_domain_D(zp))
        throw domain_error("stability_report: z, zp (or conjugates) must lie in D");
    const int n = S.n();
    StabilityReport rep;
    rep.gap_plus = S.spectral_data().gap_plus;
    rep.gap_minus = S.spectral_data().gap_minus;
    const cplx w = sc::stieltjes(z) * sc::stieltjes(zp);
    Eigen::MatrixXcd A = -w * S.s();
    A.diagonal().array() += 1.0;
    const Eigen::MatrixXcd inv = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).inverse();
    rep.norm_ratio = inf_norm(inv) * std::abs(1.0 - w);
    const Eigen::MatrixXcd proj =
        inv - Eigen::MatrixXcd::Constant(n, n, 1.0 / n) * inv;
    rep.projected_norm = inf_norm(proj);
    rep.rho = rho(S, z);
    return rep;
}

}  // namespace wigner::prof
