#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace branchlight {

// Neumaier-compensated accumulator; order-sensitive inputs must be fed in a
// fixed order for bit-reproducible totals.
class compensated_sum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_total(std::span<const double> xs);

// Fixed-order Gauss-Legendre rule on [-1, 1].
struct gl_rule {
    std::vector<double> x;
    std::vector<double> w;
    // supported point counts: 4, 8, 15
    static const gl_rule& get(int points);
};

// Adaptive composite Gauss-Legendre integration to an absolute tolerance.
// Bisects panels until the 8- vs 15-point estimates agree.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_depth = 48);

// Monotone piecewise-cubic interpolant (Fritsch-Carlson limited slopes).
// Preserves monotonicity of the data; evaluation clamps to the end values.
class pchip {
public:
    pchip() = default;
    pchip(std::vector<double> x, std::vector<double> y);
    double operator()(double xq) const;
    const std::vector<double>& knots() const { return x_; }

private:
    std::vector<double> x_, y_, d_;
};

// First derivative by the 5-point central stencil at interior index i of a
// uniformly spaced table (requires 2 <= i <= n-3).
double central_diff5(std::span<const double> f, std::size_t i, double h);

// Exact integral of z(s)^alpha over a width-h cell on which z falls linearly
// from z0 to z1 with slope -u (z0 - z1 = u h); closed form
// (z0^{1+alpha} - z1^{1+alpha}) / ((1+alpha) u), degenerating to h z0^alpha
// for a flat cell.
double linear_power_integral(double z0, double z1, double u, double h, double alpha);

// Worker cap from BRANCHLIGHT_THREADS (>=1); hardware concurrency otherwise.
int max_threads();

// Deterministic parallel loop: [0, n) is split into fixed-size chunks
// independent of the worker count, so any chunk-local accumulation a caller
// stores per index stays bit-identical across thread settings.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& run_chunk,
                  std::size_t chunk_hint = 0);

} // namespace branchlight
