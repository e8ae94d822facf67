#include "wigner/theory.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "wigner/errors.hpp"
#include "wigner/quadrature.hpp"
#include "wigner/semicircle.hpp"
#include "wigner/spectral.hpp"

namespace wigner::theory {

namespace {

double smoothstep(double t) { return ((6 * t - 15) * t + 10) * t * t * t; }

double chi_abs(double y) {
    const double ay = std::abs(y);
    if (ay <= 1) return 1.0;
    if (ay >= 2) return 0.0;
    return smoothstep(2 - ay);
}

double pairwise_sum(std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

cd pairwise_sum(std::vector<cd>& v) {
    std::vector<double> re(v.size()), im(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) re[i] = v[i].real(), im[i] = v[i].imag();
    return {pairwise_sum(re, 0, re.size()), pairwise_sum(im, 0, im.size())};
}

// one horizontal branch: precomputed node data with dz direction folded into w
struct Branch {
    std::vector<cd> z, w;       // w = (GL weight) * (+1 lower / -1 upper)
    std::vector<cd> m, mp;      // m_sc and m_sc' at z
    std::vector<cd> fw;         // f~(z) * w
};

Branch make_branch(const spectral::TestFunction& tf, const ContourSpec& c,
                   double h, int sign_y, int order) {
    // counterclockwise strip boundary: +x along y = -h, -x along y = +h;
    // panel width 2h resolves the O(h)-wide near-singular ridge of the
    // two-contour kernel with Gauss-Legendre margin to spare
    const double span = c.x_hi - c.x_lo;
    const int panels = std::max(2, static_cast<int>(std::ceil(span / (2 * h))));
    const double hx = span / panels;
    const QuadRule& gl = gauss_legendre(order);
    Branch b;
    b.z.reserve(panels * order);
    const double dir = sign_y > 0 ? -1.0 : 1.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = c.x_lo + p * hx;
        for (int i = 0; i < order; ++i) {
            const double x = lo + 0.5 * hx * (1 + gl.x[i]);
            const cd z(x, sign_y * h);
            b.z.push_back(z);
            b.w.push_back(dir * 0.5 * hx * gl.w[i]);
            b.m.push_back(sc::stieltjes(z));
            b.mp.push_back(sc::stieltjes(z, 1));
            b.fw.push_back(almost_analytic(tf, z) * b.w.back());
        }
    }
    return b;
}

cd variance_at_height(const spectral::TestFunction& tf, const TraceKernels& K,
                      int beta, double k4, const ContourSpec& c, double h1, int order) {
    const Branch g1[2] = {make_branch(tf, c, h1, -1, order),
                          make_branch(tf, c, h1, +1, order)};
    const Branch g2[2] = {make_branch(tf, c, h1 / 2, -1, order),
                          make_branch(tf, c, h1 / 2, +1, order)};
    const double c_tr = 2.0 / beta, c_s = K.trace_S * (1.0 - 2.0 / beta);
    std::vector<cd> outer;
    for (const Branch& b1 : g1)
        for (const Branch& b2 : g2)
            for (std::size_t i = 0; i < b1.z.size(); ++i) {
                cd acc = 0;
                const cd m1 = b1.m[i], mp1 = b1.mp[i], f1 = b1.fw[i];
                for (std::size_t j = 0; j < b2.z.size(); ++j) {
                    const cd m2 = b2.m[j], mp2 = b2.mp[j];
                    cd kern = c_tr * K.variance_trace(m1, mp1, m2, mp2) +
                              2.0 * k4 * m1 * mp1 * m2 * mp2 + c_s * mp1 * mp2;
                    acc += f1 * b2.fw[j] * kern;
                }
                outer.push_back(acc);
            }
    return -pairwise_sum(outer) / (4 * M_PI * M_PI);
}

cd bias_at_height(const spectral::TestFunction& tf, const TraceKernels& K,
                  int beta, double k4, const ContourSpec& c, double h1, int order) {
    const Branch g1[2] = {make_branch(tf, c, h1, -1, order),
                          make_branch(tf, c, h1, +1, order)};
    const double c_tr = 2.0 / beta - 1.0;
    std::vector<cd> terms;
    for (const Branch& b : g1)
        for (std::size_t i = 0; i < b.z.size(); ++i) {
            const cd m = b.m[i], mp = b.mp[i];
            terms.push_back(b.fw[i] * (c_tr * K.bias_trace(m, mp) + k4 * mp * m * m * m));
        }
    // orientation fixed so the edge regime approaches +(2/beta-1) g(0)/4,
    // the sign Monte Carlo reproduces
    return -pairwise_sum(terms) / cd(0, 2 * M_PI);
}

// contour-height extrapolation: the almost-analytic integrand leaves an
// O(h^2 log h) height dependence, so fit V(r) = V0 + a r^2 + b r^2 ln r on
// the rung ladder r = h1/eta0 in {0.2, 0.1, 0.05} and keep V0
constexpr double kRungs[3] = {0.2, 0.1, 0.05};

cd extrapolate(const cd v[3]) {
    Eigen::Matrix3d A;
    Eigen::Vector3cd rhs;
    for (int i = 0; i < 3; ++i) {
        const double r = kRungs[i];
        A(i, 0) = 1;
        A(i, 1) = r * r;
        A(i, 2) = r * r * std::log(r);
        rhs[i] = v[i];
    }
    Eigen::PartialPivLU<Eigen::Matrix3d> lu(A);
    const Eigen::Vector3cd x = lu.solve(rhs);
    return x[0];
}

using Evaluator = cd (*)(const spectral::TestFunction&, const TraceKernels&, int, double,
                         const ContourSpec&, double, int);

double ladder(Evaluator eval, const spectral::TestFunction& tf, const TraceKernels& K,
              int beta, double k4, const ContourSpec& c, double* err_estimate,
              const char* what) {
    cd coarse[3], fine[3];
    for (int i = 0; i < 3; ++i) {
        const double h1 = kRungs[i] * c.eta0;
        coarse[i] = eval(tf, K, beta, k4, c, h1, c.order);
        fine[i] = eval(tf, K, beta, k4, c, h1, 2 * c.order);
    }
    const cd v0 = extrapolate(fine);
    const double est = std::abs(v0 - extrapolate(coarse));
    const double mag = std::max(std::abs(v0.real()), 1e-12);
    if (std::abs(v0.imag()) > 1e-6 * mag)
        throw numeric_error(std::string(what) + ": imaginary residue " +
                            std::to_string(std::abs(v0.imag())) + " exceeds 1e-6 of " +
                            std::to_string(mag));
    if (est > 1e-3 * mag)
        throw numeric_error(std::string(what) + ": node doubling changes the value by " +
                            std::to_string(est) + " (not converged)");
    if (err_estimate) *err_estimate = est;
    return v0.real();
}

}  // namespace

ContourSpec ContourSpec::for_config(const spectral::TestFunction& tf, long N,
                                    double tau, int order) {
    if (N < 2) throw argument_error("ContourSpec: N must be at least 2");
    if (order < 2) throw argument_error("ContourSpec: order must be at least 2");
    ContourSpec c;
    c.N = N;
    c.eta0 = tf.eta0();
    c.kappa0 = spectral::kappa0(tf);
    c.c0 = 1.0 + std::log(c.eta0 * std::sqrt(c.kappa0 + c.eta0)) / std::log(double(N));
    if (!(c.c0 > 0))
        throw argument_error("ContourSpec: eta0 below the N^{-1+c0} resolution floor");
    c.tau = tau > 0 ? tau : std::min(0.05, c.c0 / 32);
    if (!(c.tau < c.c0 / 16))
        throw argument_error("ContourSpec: tau must stay below c0/16 = " +
                             std::to_string(c.c0 / 16));
    c.h1 = c.eta0 * std::pow(double(N), -c.tau);
    c.h2 = c.h1 / 2;
    if (!(c.h1 < 1))
        throw argument_error("ContourSpec: contour height must stay below 1");
    c.x_lo = tf.x_lo() - c.eta0;
    c.x_hi = tf.x_hi() + c.eta0;
    c.order = order;
    return c;
}

cd almost_analytic(const spectral::TestFunction& tf, cd z) {
    const double x = z.real(), y = z.imag();
    const double c = chi_abs(y);
    if (c == 0.0) return 0;
    return (tf.f(x) + cd(0, y * tf.f1(x))) * c;
}

TraceKernels kernels_from_profile(const prof::VarianceProfile& S) {
    TraceKernels K;
    const auto clusters = S.spectral_data().clusters;
    K.variance_trace = [clusters](cd m1, cd mp1, cd m2, cd mp2) {
        cd s = 0;
        for (const auto& [lam, mult] : clusters) {
            const cd d = 1.0 - m1 * m2 * lam;
            s += double(mult) * lam / (d * d);
        }
        return mp1 * mp2 * s;
    };
    K.bias_trace = [clusters](cd m, cd mp) {
        cd s = 0;
        for (const auto& [lam, mult] : clusters)
            s += double(mult) * lam * lam / (1.0 - m * m * lam);
        return mp * m * m * m * s;
    };
    K.trace_S = S.trace();
    return K;
}

TraceKernels kernels_rank_one() {
    TraceKernels K;
    K.variance_trace = [](cd m1, cd mp1, cd m2, cd mp2) {
        const cd d = 1.0 - m1 * m2;
        return mp1 * mp2 / (d * d);
    };
    K.bias_trace = [](cd m, cd mp) { return mp * m * m * m / (1.0 - m * m); };
    K.trace_S = 1;
    return K;
}

double variance_Vf(const spectral::TestFunction& tf, const TraceKernels& K,
                   int beta, double k4, const ContourSpec& contour, double* err_estimate) {
    if (beta != 1 && beta != 2) throw argument_error("variance_Vf: beta must be 1 or 2");
    return ladder(&variance_at_height, tf, K, beta, k4, contour, err_estimate,
                  "variance_Vf");
}

double variance_Vf(const spectral::TestFunction& tf, const prof::VarianceProfile& S,
                   int beta, double k4, const ContourSpec& contour, double* err_estimate) {
    return variance_Vf(tf, kernels_from_profile(S), beta, k4, contour, err_estimate);
}

double bias_Bf(const spectral::TestFunction& tf, const TraceKernels& K,
               int beta, double k4, const ContourSpec& contour, double* err_estimate) {
    if (beta != 1 && beta != 2) throw argument_error("bias_Bf: beta must be 1 or 2");
    if (beta == 2 && k4 == 0) {
        if (err_estimate) *err_estimate = 0;
        return 0.0;  // both coefficients vanish identically
    }
    return ladder(&bias_at_height, tf, K, beta, k4, contour, err_estimate, "bias_Bf");
}

double bias_Bf(const spectral::TestFunction& tf, const prof::VarianceProfile& S,
               int beta, double k4, const ContourSpec& contour, double* err_estimate) {
    return bias_Bf(tf, kernels_from_profile(S), beta, k4, contour, err_estimate);
}

TheoryPrediction predict(const spectral::TestFunction& tf, const prof::VarianceProfile& S,
                         int beta, double k4, const ContourSpec& contour) {
    const TraceKernels K = kernels_from_profile(S);
    TheoryPrediction p;
    double ev = 0, eb = 0;
    p.variance = variance_Vf(tf, K, beta, k4, contour, &ev);
    p.bias = bias_Bf(tf, K, beta, k4, contour, &eb);
    p.k4_used = k4;
    p.tau = contour.tau;
    p.quadrature_error_estimate = std::max(ev, eb);
    return p;
}

namespace {

// |fhat(xi)|^2 for a compactly supported payload, by oscillation-resolving
// composite GL quadrature; fhat(xi) = (2pi)^{-1/2} int f(x) e^{-i xi x} dx
double fhat_sq(const std::function<double(double)>& f, double lo, double hi,
               double xi, int order) {
    const double span = hi - lo;
    const int panels =
        std::max(4, static_cast<int>(std::ceil(span * (std::abs(xi) + 1) / 4)));
    const double hx = span / panels;
    const QuadRule& gl = gauss_legendre(order);
    double re = 0, im = 0;
    for (int p = 0; p < panels; ++p) {
        const double plo = lo + p * hx;
        for (int i = 0; i < order; ++i) {
            const double x = plo + 0.5 * hx * (1 + gl.x[i]);
            const double w = 0.5 * hx * gl.w[i], v = f(x);
            re += w * v * std::cos(xi * x);
            im -= w * v * std::sin(xi * x);
        }
    }
    return (re * re + im * im) / (2 * M_PI);
}

// 2 int_0^inf xi |fhat|^2 dxi with geometric blocks and tail extrapolation
double spectral_energy(const std::function<double(double)>& f, double lo, double hi,
                       double tail_tol) {
    const int order = 12;
    const double w_xi = std::min(0.5, 2.0 / (hi - lo));
    const QuadRule& gl = gauss_legendre(order);
    auto block = [&](double b_lo, double b_hi) {
        const int panels = std::max(1, static_cast<int>(std::ceil((b_hi - b_lo) / w_xi)));
        const double hx = (b_hi - b_lo) / panels;
        double s = 0;
        for (int p = 0; p < panels; ++p)
            for (int i = 0; i < order; ++i) {
                const double xi = b_lo + p * hx + 0.5 * hx * (1 + gl.x[i]);
                s += 0.5 * hx * gl.w[i] * xi * fhat_sq(f, lo, hi, xi, order);
            }
        return s;
    };
    double total = 2 * block(0, 1);
    double prev = total / 2, b_lo = 1;
    while (b_lo < 4096) {
        const double cur = block(b_lo, 2 * b_lo);
        total += 2 * cur;
        if (prev > 0 && cur < prev) {
            const double q = cur / prev;
            const double tail = cur * q / (1 - q);
            if (2 * (cur + tail) < tail_tol) return total;
        }
        prev = cur;
        b_lo *= 2;
    }
    throw numeric_error("spectral_energy: Fourier tail not below tolerance by xi = 4096");
}

}  // namespace

double bulk_limit(const spectral::TestFunction& g, int beta) {
    if (beta != 1 && beta != 2) throw argument_error("bulk_limit: beta must be 1 or 2");
    auto f = [&g](double x) { return g.g(x); };
    return spectral_energy(f, g.a(), g.b(), 1e-6) / (beta * M_PI);
}

EdgeLimit edge_limit(const spectral::TestFunction& g, int beta, int side) {
    if (beta != 1 && beta != 2) throw argument_error("edge_limit: beta must be 1 or 2");
    if (side != 2 && side != -2) throw argument_error("edge_limit: side must be +2 or -2");
    EdgeLimit out{};
    out.mean = (2.0 / beta - 1.0) * g.g(0.0) / 4.0;
    const double sgn = side == 2 ? -1.0 : 1.0;
    auto h = [&g, sgn](double x) { return g.g(sgn * x * x); };
    const double L = std::sqrt(std::max(std::abs(g.a()), std::abs(g.b()))) + 1e-12;
    out.variance = spectral_energy(h, -L, L, 1e-6) / (2 * beta * M_PI);
    return out;
}

}  // namespace wigner::theory
