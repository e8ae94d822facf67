#pragma once
#include <functional>
#include <vector>

namespace wigner {

struct QuadRule {
    std::vector<double> x, w;
    std::size_t size() const { return x.size(); }
};

// Gauss-Legendre rule on [-1,1]; cached per order, thread-safe.
const QuadRule& gauss_legendre(int order);

// Composite Gauss-Legendre: `panels` equal subintervals of [lo,hi], `order`
// nodes each, concatenated left to right.
QuadRule composite_gl(double lo, double hi, int panels, int order);

// Adaptive bisection integration to absolute tolerance `abs_tol`; error
// estimated per panel by comparing two Gauss orders. Throws numeric_error
// if the tolerance is unreachable within max_depth.
double integrate_adaptive(const std::function<double(double)>& f, double lo,
                          double hi, double abs_tol, int order = 15,
                          int max_depth = 48);

}  // namespace wigner
