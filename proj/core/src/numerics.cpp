#include "branchlight/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace branchlight {

double compensated_total(std::span<const double> xs) {
    compensated_sum s;
    for (double x : xs) s.add(x);
    return s.value();
}

namespace {

gl_rule make_rule(std::initializer_list<double> xs, std::initializer_list<double> ws) {
    gl_rule r;
    for (double x : xs) {
        if (x != 0.0) r.x.push_back(-x);
        r.x.push_back(x);
    }
    auto wit = ws.begin();
    for (double x : xs) {
        (void)x;
        if (x != 0.0) r.w.push_back(*wit);
        r.w.push_back(*wit);
        ++wit;
    }
    // sort nodes ascending, carrying weights
    std::vector<std::size_t> idx(r.x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return r.x[a] < r.x[b]; });
    gl_rule out;
    for (std::size_t i : idx) {
        out.x.push_back(r.x[i]);
        out.w.push_back(r.w[i]);
    }
    return out;
}

} // namespace

const gl_rule& gl_rule::get(int points) {
    static const gl_rule g4 = make_rule({0.3399810435848563, 0.8611363115940526},
                                        {0.6521451548625461, 0.3478548451374538});
    static const gl_rule g8 = make_rule(
        {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363},
        {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763});
    static const gl_rule g15 = make_rule(
        {0.0, 0.2011940939974345, 0.3941513470775634, 0.5709721726085388,
         0.7244177313601701, 0.8482065834104272, 0.9372733924007060, 0.9879925180204854},
        {0.2025782419255613, 0.1984314853271116, 0.1861610000155622, 0.1662692058169939,
         0.1395706779261543, 0.1071592204671719, 0.0703660474881081, 0.0307532419961173});
    switch (points) {
        case 4: return g4;
        case 8: return g8;
        case 15: return g15;
        default: throw std::invalid_argument("gl_rule: unsupported point count");
    }
}

namespace {

double apply_rule(const gl_rule& r, const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    compensated_sum s;
    for (std::size_t i = 0; i < r.x.size(); ++i) s.add(r.w[i] * f(mid + half * r.x[i]));
    return half * s.value();
}

void integrate_rec(const std::function<double(double)>& f, double a, double b, double tol,
                   int depth, int max_depth, compensated_sum& acc) {
    const gl_rule& lo = gl_rule::get(8);
    const gl_rule& hi = gl_rule::get(15);
    const double coarse = apply_rule(lo, f, a, b);
    const double fine = apply_rule(hi, f, a, b);
    if (std::abs(fine - coarse) <= tol || depth >= max_depth) {
        acc.add(fine);
        return;
    }
    const double mid = 0.5 * (a + b);
    integrate_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth, acc);
    integrate_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth, acc);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
    if (!(abs_tol > 0)) throw std::invalid_argument("integrate: tolerance must be positive");
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    compensated_sum acc;
    integrate_rec(f, a, b, abs_tol, 0, max_depth, acc);
    return sign * acc.value();
}

pchip::pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("pchip: need >= 2 matching knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("pchip: knots must increase strictly");
    d_.assign(n, 0.0);
    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        del[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
        d_[0] = d_[1] = del[0];
        return;
    }
    // Fritsch-Carlson: harmonic-mean interior slopes, limited end slopes
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (del[i - 1] * del[i] > 0.0) {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0)
            d = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0))
            d = 3.0 * d0;
        return d;
    };
    d_[0] = end_slope(h[0], h[1], del[0], del[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
}

double pchip::operator()(double xq) const {
    if (x_.empty()) throw std::logic_error("pchip: empty interpolant");
    if (xq <= x_.front()) return y_.front();
    if (xq >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double central_diff5(std::span<const double> f, std::size_t i, double h) {
    if (i < 2 || i + 2 >= f.size()) throw std::invalid_argument("central_diff5: stencil out of range");
    return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
}

double linear_power_integral(double z0, double z1, double u, double h, double alpha) {
    if (u > 1e-300) {
        const double p = 1.0 + alpha;
        return (std::pow(z0, p) - std::pow(z1, p)) / (p * u);
    }
    return h * std::pow(z0, alpha);
}

int max_threads() {
    if (const char* env = std::getenv("BRANCHLIGHT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& run_chunk,
                  std::size_t chunk_hint) {
    if (n == 0) return;
    const int workers = std::min<int>(max_threads(), 64);
    std::size_t chunk = chunk_hint;
    if (chunk == 0) chunk = std::max<std::size_t>(1, n / 64);
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    if (workers <= 1 || n_chunks <= 1) {
        for (std::size_t k = 0; k < n_chunks; ++k)
            run_chunk(k * chunk, std::min(n, (k + 1) * chunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n_chunks) return;
            run_chunk(k * chunk, std::min(n, (k + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    const int spawn = std::min<int>(workers, static_cast<int>(n_chunks));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace branchlight
