#include "wigner/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "wigner/errors.hpp"

namespace wigner {

static QuadRule make_gl(int n) {
    if (n < 1) throw argument_error("gauss_legendre: order must be >= 1");
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    // Newton on P_n with the Legendre three-term recurrence
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double p1 = 0, dp = 0;
        for (int it = 0; it < 100; ++it) {
            p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) * x * p2 - j * p3) / (j + 1);
            }
            dp = n * (x * p1 - p2) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[k] = -x;
        r.w[k] = w;
        r.x[n - 1 - k] = x;
        r.w[n - 1 - k] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

const QuadRule& gauss_legendre(int order) {
    static std::mutex mu;
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_gl(order)).first;
    return it->second;
}

QuadRule composite_gl(double lo, double hi, int panels, int order) {
    if (panels < 1) throw argument_error("composite_gl: panels must be >= 1");
    if (!(hi > lo)) throw argument_error("composite_gl: need hi > lo");
    const QuadRule& base = gauss_legendre(order);
    QuadRule r;
    r.x.reserve(size_t(panels) * order);
    r.w.reserve(size_t(panels) * order);
    const double dw = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * dw, c = a + 0.5 * dw;
        for (int j = 0; j < order; ++j) {
            r.x.push_back(c + 0.5 * dw * base.x[j]);
            r.w.push_back(0.5 * dw * base.w[j]);
        }
    }
    return r;
}

static double gl_apply(const std::function<double(double)>& f, double a,
                       double b, const QuadRule& q) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (size_t j = 0; j < q.size(); ++j) s += q.w[j] * f(c + h * q.x[j]);
    return h * s;
}

static double adapt_rec(const std::function<double(double)>& f, double a,
                        double b, double tol, const QuadRule& q1,
                        const QuadRule& q2, int depth, int max_depth) {
    const double i1 = gl_apply(f, a, b, q1);
    const double i2 = gl_apply(f, a, b, q2);
    if (std::abs(i2 - i1) <= tol || depth >= max_depth) {
        if (depth >= max_depth && std::abs(i2 - i1) > tol)
            throw numeric_error("integrate_adaptive: tolerance not reached");
        return i2;
    }
    const double m = 0.5 * (a + b);
    return adapt_rec(f, a, m, 0.5 * tol, q1, q2, depth + 1, max_depth) +
           adapt_rec(f, m, b, 0.5 * tol, q1, q2, depth + 1, max_depth);
}

double integrate_adaptive(const std::function<double(double)>& f, double lo,
                          double hi, double abs_tol, int order, int max_depth) {
    if (!(abs_tol > 0)) throw argument_error("integrate_adaptive: tol must be > 0");
    if (lo == hi) return 0.0;
    double sgn = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sgn = -1.0;
    }
    const QuadRule& q1 = gauss_legendre(order);
    const QuadRule& q2 = gauss_legendre(order + 10);
    return sgn * adapt_rec(f, lo, hi, abs_tol, q1, q2, 0, max_depth);
}

}  // namespace wigner
