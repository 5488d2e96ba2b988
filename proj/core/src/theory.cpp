#include "branchlight/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace branchlight {

namespace {

// lambda^alpha with the endpoint values taken exactly
double pow_frac(double lambda, double alpha) {
    if (lambda == 0.0) return alpha == 0.0 ? 1.0 : 0.0;
    if (lambda == 1.0) return 1.0;
    return std::exp(alpha * std::log(lambda));
}

} // namespace

double bypass_margin(double lambda, double theta_a, double theta_b, double alpha) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("bypass_margin: lambda must lie in [0, 1]");
    return 1.0 - pow_frac(lambda, alpha) * std::cos(theta_a) +
           pow_frac(1.0 - lambda, alpha) * std::cos(theta_a + theta_b);
}

ratio_value bypass_ratio(double lambda, double alpha) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("bypass_ratio: lambda must lie in [0, 1]");
    if (lambda == 0.0 || lambda == 1.0) return {0.0, true};
    const double num =
        pow_frac(lambda, 2.0 * alpha) + pow_frac(1.0 - lambda, 2.0 * alpha) - 1.0;
    const double den = 2.0 * pow_frac(lambda, alpha) * pow_frac(1.0 - lambda, alpha);
    return {num / den, false};
}

double bypass_ratio_peak(double alpha) { return 1.0 - std::exp2(2.0 * alpha - 1.0); }

condition_check optimal_shape_applicable(double alpha, double theta0) {
    if (!(theta0 > 0.0 && theta0 <= 1.5707963267948966 + 1e-12))
        throw std::invalid_argument("optimal_shape_applicable: theta0 must lie in (0, pi/2]");
    condition_check r;
    r.lhs = std::cos(1.5707963267948966 - theta0);
    r.rhs = bypass_ratio_peak(alpha);
    r.applicable = alpha >= 0.5 || r.lhs >= r.rhs;
    return r;
}

void validate(const bypass_config& cfg) {
    if (cfg.kappa.empty()) throw std::invalid_argument("bypass config: no fluxes");
    for (double k : cfg.kappa)
        if (!(k > 0.0)) throw std::invalid_argument("bypass config: fluxes must be positive");
    if (!(cfg.sigma >= 0.0)) throw std::invalid_argument("bypass config: sigma must be >= 0");
    if (!(cfg.theta_a >= 0.0 && cfg.theta_a <= 1.5707963267948966 + 1e-12))
        throw std::invalid_argument("bypass config: theta_a must lie in [0, pi/2]");
    if (!(cfg.ell_a >= 0.0) || !(cfg.ell_b >= 0.0))
        throw std::invalid_argument("bypass config: lengths must be >= 0");
    if (!cfg.thetas.empty()) {
        const double cap = 1.5707963267948966 - cfg.theta0;
        double prev = cap;
        for (double th : cfg.thetas) {
            if (!(th >= 0.0 && th < prev))
                throw std::invalid_argument(
                    "bypass config: peel-off angles must decrease strictly inside "
                    "[0, pi/2 - theta0)");
            prev = th;
        }
    }
}

double bypass_difference(const bypass_config& cfg, double alpha) {
    validate(cfg);
    if (cfg.kappa.size() != 1)
        throw std::invalid_argument("bypass_difference: single peel-off flux required");
    const double kappa = cfg.kappa[0];
    const double gamma = cfg.theta_a + cfg.theta_b;
    // third side of the (ell_a, ell_b, gamma) triangle
    const double dist = std::hypot(cfg.ell_a - cfg.ell_b * std::cos(gamma),
                                   cfg.ell_b * std::sin(gamma));
    return std::pow(kappa + cfg.sigma, alpha) * cfg.ell_a -
           std::pow(cfg.sigma, alpha) * cfg.ell_a * std::cos(cfg.theta_a) +
           std::pow(kappa, alpha) * (cfg.ell_b - dist);
}

double bypass_remainder(vec2 p_star, std::span<const vec2> path_points,
                        std::span<const double> kappas, double alpha) {
    const std::size_t n = kappas.size();
    if (n < 1 || path_points.size() != n + 1)
        throw std::invalid_argument(
            "bypass_remainder: need kappas.size() + 1 path points");
    for (double k : kappas)
        if (!(k > 0.0)) throw std::invalid_argument("bypass_remainder: fluxes must be positive");

    double total = 0.0, prefix = 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        total += kappas[j];
        sum += std::pow(kappas[j], alpha) * (p_star - path_points[j]).norm();
    }
    for (std::size_t j = 0; j < n; ++j) {
        prefix += kappas[j];
        sum -= std::pow(prefix, alpha) * (path_points[j + 1] - path_points[j]).norm();
    }
    sum -= std::pow(total, alpha) *
           ((p_star - path_points[0]).norm() - (path_points[n] - path_points[0]).norm());
    return sum;
}

direction_gain alpha_zero_K(const light_field& field, int angular_grid) {
    if (angular_grid < 360)
        throw std::invalid_argument("alpha_zero_K: need at least 360 grid directions");
    validate(field);

    auto score = [&](double w) {
        const vec2 dir{std::cos(w), std::sin(w)};
        double s = 0.0;
        for (const auto& smp : field.samples)
            s += smp.weight * std::abs(dir.dot(smp.n.unit()));
        return s;
    };

    const double two_pi = 6.283185307179586;
    const double h = two_pi / angular_grid;
    int best = 0;
    double best_val = score(0.0);
    for (int i = 1; i < angular_grid; ++i) {
        const double v = score(i * h);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }

    // one golden-section pass on the bracketing interval
    const double inv_phi = 0.6180339887498949;
    double a = (best - 1) * h, b = (best + 1) * h;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = score(x1), f2 = score(x2);
    while (b - a > 1e-12) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = score(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = score(x1);
        }
    }
    const double w = 0.5 * (a + b);
    const double v = score(w);
    direction_gain out;
    if (v >= best_val) {
        out.K = v;
        out.w_angle = w;
    } else {
        out.K = best_val;
        out.w_angle = best * h;
    }
    return out;
}

alpha_zero_report alpha_zero_verdict(double K, double c, double lambda_density,
                                     double ell) {
    if (!(lambda_density > 0.0 && ell > 0.0))
        throw std::invalid_argument("alpha_zero_verdict: lambda and ell must be positive");
    if (!(K >= 0.0 && c > 0.0))
        throw std::invalid_argument("alpha_zero_verdict: need K >= 0 and c > 0");
    alpha_zero_report r;
    r.witness_value = ((-std::expm1(-lambda_density)) * K - c) * ell;
    r.upper_bound = (K - c) * ell;
    if (K > c) {
        r.verdict = alpha_zero_kind::unbounded;
        r.verdict_name = "UNBOUNDED";
    } else {
        r.verdict = alpha_zero_kind::zero;
        r.verdict_name = "ZERO";
    }
    return r;
}

} // namespace branchlight
