#include "wigner/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wigner/errors.hpp"
#include "wigner/lapack.hpp"
#include "wigner/quadrature.hpp"
#include "wigner/semicircle.hpp"

namespace wigner::spectral {

using cd = std::complex<double>;

namespace {

void require_hermitian(const Eigen::MatrixXd& H) {
    if (H.rows() != H.cols()) throw argument_error("eigenvalues: matrix not square");
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw argument_error("eigenvalues: matrix not symmetric");
}

void require_hermitian(const Eigen::MatrixXcd& H) {
    if (H.rows() != H.cols()) throw argument_error("eigenvalues: matrix not square");
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw argument_error("eigenvalues: matrix not Hermitian");
}

}  // namespace

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& H) {
    require_hermitian(H);
    return la::eigh_values(H);
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& H) {
    require_hermitian(H);
    return la::eigh_values(H);
}

SpectralSample make_sample(const ensemble::EnsembleSpec& spec,
                           const prof::VarianceProfile& S, long index) {
    SpectralSample out;
    out.provenance = spec;
    out.sample_index = index;
    if (spec.beta == 1)
        out.eigenvalues = la::eigh_values(ensemble::sample_real(spec, S, index));
    else
        out.eigenvalues = la::eigh_values(ensemble::sample_complex(spec, S, index));
    return out;
}

Eigen::MatrixXcd resolvent(const Eigen::MatrixXcd& H, cd z) {
    if (z.imag() == 0.0) throw domain_error("resolvent: z must be off the real axis");
    require_hermitian(H);
    const auto n = H.rows();
    Eigen::MatrixXcd A = H;
    A.diagonal().array() -= z;
    return A.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
}

Eigen::MatrixXcd resolvent(const Eigen::MatrixXd& H, cd z) {
    return resolvent(Eigen::MatrixXcd(H.cast<cd>()), z);
}

ResolventFactory::ResolventFactory(const Eigen::MatrixXd& H) {
    require_hermitian(H);
    la::eigh(H, w_, Vr_);  // keep the real eigenvectors: at() then runs on two
                           // real products instead of one complex one
}

ResolventFactory::ResolventFactory(const Eigen::MatrixXcd& H) {
    require_hermitian(H);
    la::eigh(H, w_, V_);
}

Eigen::MatrixXcd ResolventFactory::at(cd z) const {
    if (z.imag() == 0.0) throw domain_error("resolvent: z must be off the real axis");
    Eigen::VectorXcd d = (w_.cast<cd>().array() - z).inverse();
    if (Vr_.size() > 0) {
        const Eigen::MatrixXd re = Vr_ * d.real().asDiagonal() * Vr_.transpose();
        const Eigen::MatrixXd im = Vr_ * d.imag().asDiagonal() * Vr_.transpose();
        Eigen::MatrixXcd G(Vr_.rows(), Vr_.cols());
        G.real() = re;
        G.imag() = im;
        return G;
    }
    return V_ * d.asDiagonal() * V_.adjoint();
}

cd ResolventFactory::trace(cd z) const {
    if (z.imag() == 0.0) throw domain_error("resolvent: z must be off the real axis");
    cd s = 0;
    for (Eigen::Index i = 0; i < w_.size(); ++i) s += 1.0 / (w_[i] - z);
    return s;
}

CenteredStat centered_statistic(const SpectralSample& sample, const TestFunction& tf) {
    CenteredStat out{0, 0, 0};
    for (Eigen::Index i = 0; i < sample.eigenvalues.size(); ++i)
        out.raw += tf.f(sample.eigenvalues[i]);
    const double n = static_cast<double>(sample.n());
    const double lo = std::max(tf.x_lo(), -2.0), hi = std::min(tf.x_hi(), 2.0);
    if (lo < hi) {
        out.sc_expectation = integrate_adaptive(
            [&](double x) { return n * tf.f(x) * sc::density(x); }, lo, hi, 1e-8 * n);
    }
    out.centered = out.raw - out.sc_expectation;
    return out;
}

double kappa0(const TestFunction& tf) {
    const double lo = tf.x_lo(), hi = tf.x_hi();
    double d = std::numeric_limits<double>::infinity();
    for (double e : {-2.0, 2.0}) {
        if (lo <= e && e <= hi) return 0.0;
        d = std::min(d, std::max(lo - e, e - hi));
    }
    return d;
}

namespace {

// chi(y): 1 on [0, y1], quintic ramp down on [y1, y2], 0 beyond
struct Chi {
    double y1, y2;
    double val(double y) const {
        if (y <= y1) return 1.0;
        if (y >= y2) return 0.0;
        const double t = (y2 - y) / (y2 - y1);
        return ((6 * t - 15) * t + 10) * t * t * t;
    }
    double der(double y) const {
        if (y <= y1 || y >= y2) return 0.0;
        const double t = (y2 - y) / (y2 - y1);
        return -30 * t * t * (t - 1) * (t - 1) / (y2 - y1);
    }
};

}  // namespace

double trace_f_hs(const Eigen::MatrixXd& H, const TestFunction& tf, const HsParams& hs) {
    if (H.rows() > 500)
        throw argument_error("trace_f_hs: n must be <= 500 for 2D quadrature");
    if (!(hs.y_min > 0) || !(hs.chi_flat > 0) || !(hs.chi_end <= 10) ||
        !(hs.chi_flat < hs.chi_end))
        throw argument_error("trace_f_hs: bad cutoff parameters");
    const Eigen::VectorXd w = eigenvalues(H);

    const double y1 = hs.chi_flat * tf.eta0(), y2 = hs.chi_end * tf.eta0();
    if (hs.y_min >= y1) throw argument_error("trace_f_hs: y_min at or above the chi plateau");
    const Chi chi{y1, y2};
    const double xa = tf.x_lo(), xb = tf.x_hi(), span = xb - xa;

    auto tr_g = [&](cd z) {
        cd s = 0;
        for (Eigen::Index i = 0; i < w.size(); ++i) s += 1.0 / (w[i] - z);
        return s;
    };

    auto evaluate = [&](int m) {
        const QuadRule& gl = gauss_legendre(m);
        cd total = 0;
        double y_lo = hs.y_min;
        while (y_lo < y2) {
            double y_hi = std::min(2 * y_lo, y2);
            if (y_lo < y1 && y_hi > y1) y_hi = y1;  // align a panel edge with the chi kink
            // x panels sized to the pole scale of Tr G at this height
            const double w_target = std::max(2 * y_lo, span / 256);
            const int npx = std::max(1, static_cast<int>(std::ceil(span / w_target)));
            const double hx = span / npx;
            for (int iy = 0; iy < m; ++iy) {
                const double y = 0.5 * (y_hi + y_lo) + 0.5 * (y_hi - y_lo) * gl.x[iy];
                const double wy = 0.5 * (y_hi - y_lo) * gl.w[iy];
                const double cv = chi.val(y), cd1 = chi.der(y);
                for (int p = 0; p < npx; ++p) {
                    const double plo = xa + p * hx;
                    for (int ix = 0; ix < m; ++ix) {
                        const double x = plo + 0.5 * hx * (1 + gl.x[ix]);
                        const double wx = 0.5 * hx * gl.w[ix];
                        const cd dbar = cd(0, 0.5) *
                            (y * tf.f2(x) * cv + (tf.f(x) + cd(0, y * tf.f1(x))) * cd1);
                        total += wx * wy * dbar * tr_g(cd(x, y));
                    }
                }
            }
            y_lo = y_hi;
        }
        return 2.0 / M_PI * total.real();
    };

    const double coarse = evaluate(hs.order);
    const double fine = evaluate(2 * hs.order);
    const double est = std::abs(fine - coarse);
    if (est > hs.rel_tol * std::max(std::abs(fine), 1e-6))
        throw numeric_error("trace_f_hs: quadrature not converged (estimate " +
                            std::to_string(est) + ", coarse " + std::to_string(coarse) +
                            ", fine " + std::to_string(fine) + ")");
    return fine;
}

}  // namespace wigner::spectral
