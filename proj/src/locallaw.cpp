#include "wigner/locallaw.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "wigner/errors.hpp"
#include "wigner/rng.hpp"
#include "wigner/semicircle.hpp"

namespace wigner::locallaw {

namespace {

void require_probe(cplx z, long N, const char* who) {
    if (!sc::in_domain_Dprime(z, N))
        throw domain_error(std::string(who) + ": probe outside the domain D'");
}

void require_finite(const LawReport& rep, const char* who) {
    for (const auto& [name, r] : rep.ratios)
        if (!(r >= 0) || !std::isfinite(r))
            throw numeric_error(std::string(who) + ": ratio '" + name + "' not finite");
}

// S real times complex matrix without promoting S: two real products
Eigen::MatrixXcd real_times_complex(const Eigen::MatrixXd& A, const Eigen::MatrixXcd& B) {
    Eigen::MatrixXcd out(A.rows(), B.cols());
    out.real() = A * B.real();
    out.imag() = A * B.imag();
    return out;
}

}  // namespace

bool LawReport::pass() const {
    for (const auto& [name, r] : ratios)
        if (!(r <= pass_band)) return false;
    return !ratios.empty();
}

double default_band(long N) { return 5.0 * std::pow(double(N), 0.05); }

std::vector<Eigen::VectorXd> default_test_vectors(int n, std::uint64_t seed) {
    if (n < 1) throw argument_error("default_test_vectors: n must be positive");
    std::vector<Eigen::VectorXd> v;
    auto coord = [n](int i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(i) = 1.0;
        return e;
    };
    v.push_back(coord(0));
    if (n > 2) v.push_back(coord(n / 2));
    if (n > 1) v.push_back(coord(n - 1));
    v.push_back(Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n))));
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = rng::normal(seed, 0x74657374u, std::uint64_t(i));
    v.push_back(r / r.norm());
    return v;
}

LawReport check_resolvent_laws(const spectral::ResolventFactory& F,
                               const prof::VarianceProfile& S, cplx z,
                               const std::vector<Eigen::VectorXd>& test_vectors,
                               double band, double rho_hint) {
    const int n = static_cast<int>(F.eigs().size());
    if (S.n() != n) throw argument_error("check_resolvent_laws: profile size mismatch");
    require_probe(z, n, "check_resolvent_laws");

    const cplx m = sc::stieltjes(z);
    const auto [psi, theta] = sc::control_params(z, n);
    const Eigen::MatrixXcd G = F.at(z);

    LawReport rep;
    rep.z = rep.zp = z;
    rep.pass_band = band > 0 ? band : default_band(n);

    Eigen::MatrixXcd D = G;
    D.diagonal().array() -= m;
    rep.ratios["entrywise"] = D.cwiseAbs().maxCoeff() / psi;

    rep.ratios["average"] = std::abs(G.trace() / double(n) - m) / theta;

    const double rho = rho_hint > 0 ? rho_hint : prof::rho(S, z);
    const Eigen::VectorXd wre = S.s() * G.diagonal().real().eval();
    const Eigen::VectorXd wim = S.s() * G.diagonal().imag().eval();
    double worst = 0;
    for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(cplx(wre(i), wim(i)) - m));
    rep.ratios["strong"] = worst / (rho * psi * psi);

    double iso = 0;
    std::vector<Eigen::VectorXcd> gw;
    gw.reserve(test_vectors.size());
    for (const auto& w : test_vectors) {
        if (w.size() != n) throw argument_error("check_resolvent_laws: test vector size");
        Eigen::VectorXcd u(n);
        u.real() = G.real() * w;
        u.imag() = G.imag() * w;
        gw.push_back(std::move(u));
    }
    for (const auto& v : test_vectors)
        for (std::size_t j = 0; j < test_vectors.size(); ++j) {
            const cplx form(v.dot(gw[j].real()), v.dot(gw[j].imag()));
            iso = std::max(iso, std::abs(form - m * v.dot(test_vectors[j])));
        }
    rep.ratios["isotropic"] = iso / psi;

    require_finite(rep, "check_resolvent_laws");
    return rep;
}

LawReport check_resolvent_laws(const Eigen::MatrixXd& H, const prof::VarianceProfile& S,
                               cplx z, const std::vector<Eigen::VectorXd>& test_vectors,
                               double band, double rho_hint) {
    return check_resolvent_laws(spectral::ResolventFactory(H), S, z, test_vectors, band,
                                rho_hint);
}

Eigen::MatrixXcd compute_T(const spectral::ResolventFactory& F,
                           const prof::VarianceProfile& S, cplx z, cplx zp) {
    const int n = S.n();
    if (static_cast<int>(F.eigs().size()) != n)
        throw argument_error("compute_T: profile size mismatch");
    if (z.imag() == 0 || zp.imag() == 0)
        throw domain_error("compute_T: probes must lie off the real axis");
    const Eigen::MatrixXcd C = F.at(z).cwiseProduct(F.at(zp));
    Eigen::MatrixXcd T = real_times_complex(S.s(), C);
    for (int b = 0; b < n; ++b) {
        const cplx cb = C(b, b);
        for (int a = 0; a < n; ++a) T(a, b) -= S.s()(a, b) * cb;
    }
    return T;
}

Eigen::MatrixXcd compute_T(const Eigen::MatrixXd& H, const prof::VarianceProfile& S,
                           cplx z, cplx zp) {
    return compute_T(spectral::ResolventFactory(H), S, z, zp);
}

LawReport check_T_laws(const spectral::ResolventFactory& F, const prof::VarianceProfile& S,
                       cplx z, cplx zp, double band) {
    const int n = S.n();
    require_probe(z, n, "check_T_laws");
    require_probe(zp, n, "check_T_laws");

    const cplx m1 = sc::stieltjes(z), m2 = sc::stieltjes(zp);
    const auto [psi1, th1] = sc::control_params(z, n);
    const auto [psi2, th2] = sc::control_params(zp, n);
    const double xi2 = std::pow(psi1, 1.5) * psi2 + psi1 * std::pow(psi2, 1.5);
    const double rho2 = std::abs(1.0 / (1.0 - m1 * m2));

    const Eigen::MatrixXcd T = compute_T(F, S, z, zp);
    const Eigen::MatrixXcd Tth = prof::t_theory_matrix(S, z, zp);

    LawReport rep;
    rep.z = z;
    rep.zp = zp;
    rep.pass_band = band > 0 ? band : default_band(n);
    rep.ratios["T_entrywise"] = (T - Tth).cwiseAbs().maxCoeff() / (rho2 * xi2);
    rep.ratios["T_trace"] =
        std::abs(T.trace() - Tth.trace()) /
        (n * (std::pow(psi1, 1.5) * psi2 + psi1 * std::pow(psi2, 1.5) + th1 * th1 + th1 * th2));
    Eigen::MatrixXcd P = real_times_complex(S.s(), T) * m2 - T / m1;
    P.noalias() += (m1 * m2 * m2) * (S.s() * S.s()).cast<cplx>();
    rep.ratios["P_recursion"] = P.cwiseAbs().maxCoeff() / xi2;

    require_finite(rep, "check_T_laws");
    return rep;
}

LawReport check_T_laws(const Eigen::MatrixXd& H, const prof::VarianceProfile& S, cplx z,
                       cplx zp, double band) {
    return check_T_laws(spectral::ResolventFactory(H), S, z, zp, band);
}

TraceIdentityReport check_trace_identities(const spectral::ResolventFactory& F, cplx z,
                                           cplx zp) {
    const long n = F.eigs().size();
    require_probe(z, n, "check_trace_identities");
    require_probe(zp, n, "check_trace_identities");

    TraceIdentityReport rep;
    rep.z = z;
    rep.zp = zp;
    rep.two_point = std::abs(z - zp) >= 1e-12;

    const Eigen::MatrixXcd G1 = F.at(z);
    const Eigen::MatrixXcd G2 = rep.two_point ? Eigen::MatrixXcd(F.at(zp)) : G1;
    const cplx full = G1.cwiseProduct(G2).sum();
    const cplx diag = (G1.diagonal().array() * G2.diagonal().array()).sum();
    const cplx tr_pi_t = (full - diag) / double(n);

    const cplx m1 = sc::stieltjes(z), m2 = sc::stieltjes(zp);
    const auto [psi1, th1] = sc::control_params(z, n);
    const auto [psi2, th2] = sc::control_params(zp, n);
    const cplx closed = rep.two_point ? (m1 - m2) / (z - zp) - m1 * m2
                                      : sc::stieltjes(z, 1) - m1 * m1;
    rep.deviation = std::abs(tr_pi_t - closed);
    rep.scale = (rep.two_point ? th1 + th2 : th1) / std::abs(z.imag());
    rep.ratio = rep.deviation / rep.scale;
    if (!std::isfinite(rep.ratio))
        throw numeric_error("check_trace_identities: ratio not finite");
    return rep;
}

TraceIdentityReport check_trace_identities(const Eigen::MatrixXd& H, cplx z, cplx zp) {
    return check_trace_identities(spectral::ResolventFactory(H), z, zp);
}

double t1_residual(const prof::VarianceProfile& S, cplx z, cplx zp) {
    const int n = S.n();
    const cplx m1 = sc::stieltjes(z), m2 = sc::stieltjes(zp);
    const cplx w = m1 * m2;
    Eigen::MatrixXcd A = -w * S.s();
    A.diagonal().array() += 1.0;
    const Eigen::VectorXcd e = Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(double(n)));
    const Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(e);
    const cplx trace = w * w * (e.array() * x.array()).sum();  // Tr(Pi (1-wS)^-1) = e^T x
    return std::abs(trace - w * w / (1.0 - w));
}

std::vector<cplx> probe_grid(long N) {
    std::vector<cplx> grid;
    for (double E : {-1.5, -0.5, 0.0, 0.5, 1.5})
        for (double p : {0.3, 0.5, 0.7}) {
            const cplx z(E, std::pow(double(N), -p));
            if (sc::in_domain_Dprime(z, N)) grid.push_back(z);
        }
    return grid;
}

std::string csv_header() { return "N,seed,z_re,z_im,zp_re,zp_im,check,ratio,band,pass\n"; }

void append_csv(std::string& out, long N, std::uint64_t seed, const LawReport& rep) {
    char buf[256];
    for (const auto& [name, r] : rep.ratios) {
        std::snprintf(buf, sizeof buf, "%ld,%llu,%.6g,%.6g,%.6g,%.6g,%s,%.10g,%.10g,%d\n",
                      N, static_cast<unsigned long long>(seed), rep.z.real(), rep.z.imag(),
                      rep.zp.real(), rep.zp.imag(), name.c_str(), r, rep.pass_band,
                      r <= rep.pass_band ? 1 : 0);
        out += buf;
    }
}

}  // namespace wigner::locallaw
