#include "branchlight/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace branchlight {

namespace {

void check_params(double alpha, double c, double sin_factor) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0, 1]");
    if (!(c > 0.0)) throw std::domain_error("c must be positive");
    if (!(sin_factor > 0.0)) throw std::domain_error("sin_factor must be positive");
}

// 1 + q ln q - q with the limit value at q = 0; decreases from 1 to 0 on [0,1].
double bracket(double q) {
    if (q == 0.0) return 1.0;
    if (q == 1.0) return 0.0;
    return 1.0 + q * std::log(q) - q;
}

} // namespace

double z_of_q(double q, double alpha, double c, double sin_factor) {
    check_params(alpha, c, sin_factor);
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("z_of_q: q must lie in [0, 1]");
    return std::pow(sin_factor / c, 1.0 / alpha) * std::pow(bracket(q), 1.0 / alpha);
}

double s_of_q(double q, double alpha, double c, double sin_factor) {
    check_params(alpha, c, sin_factor);
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("s_of_q: q must lie in [0, 1]");
    if (alpha == 1.0) return q / c; // dual exponent is exactly zero
    const double ex = (1.0 - alpha) / alpha;
    const double pref = std::pow(sin_factor, ex) / (alpha * std::pow(c, 1.0 / alpha));
    const double integral =
        integrate([&](double t) { return std::pow(bracket(t), ex); }, 0.0, q, 1e-13);
    return pref * integral;
}

closed_form_solution solve_ray(double alpha, double c, double sin_factor, int grid_size) {
    check_params(alpha, c, sin_factor);
    if (grid_size < 16) throw std::invalid_argument("solve_ray: grid_size must be >= 16");

    closed_form_solution sol;
    sol.alpha = alpha;
    sol.c = c;
    sol.sin_factor = sin_factor;

    // uniform nodes on [0, 0.9], then a geometric ladder into q = 1 whose
    // first step continues the uniform spacing (the arclength integrand only
    // flattens like a fractional power there)
    std::vector<double> q;
    for (int i = 0; i < grid_size; ++i) q.push_back(0.9 * i / (grid_size - 1));
    {
        const double ratio = std::max(0.5, 1.0 - (0.9 / (grid_size - 1)) / 0.1);
        for (double gap = 0.1 * ratio; gap > 1e-13; gap *= ratio) q.push_back(1.0 - gap);
    }
    q.push_back(1.0);

    const double ex = (1.0 - alpha) / alpha;
    const double pref =
        (alpha == 1.0) ? 1.0 / c : std::pow(sin_factor, ex) / (alpha * std::pow(c, 1.0 / alpha));

    std::vector<double> s(q.size(), 0.0);
    compensated_sum acc;
    for (std::size_t i = 1; i < q.size(); ++i) {
        double panel;
        if (alpha == 1.0) {
            panel = q[i] - q[i - 1];
        } else {
            panel = integrate([&](double t) { return std::pow(bracket(t), ex); }, q[i - 1], q[i],
                              1e-14);
        }
        acc.add(panel);
        s[i] = pref * acc.value();
    }

    // drop ladder nodes whose arclength no longer resolves in double
    // precision, keeping the exact terminal node
    sol.q.push_back(q[0]);
    sol.s.push_back(s[0]);
    for (std::size_t i = 1; i < q.size(); ++i) {
        if (s[i] > sol.s.back()) {
            sol.q.push_back(q[i]);
            sol.s.push_back(s[i]);
        }
    }
    if (sol.q.back() != 1.0) {
        sol.q.back() = 1.0;
        sol.s.back() = s.back();
    }
    sol.ell = sol.s.back();

    sol.z.reserve(sol.q.size());
    sol.u.reserve(sol.q.size());
    for (double qi : sol.q) {
        sol.z.push_back(z_of_q(qi, alpha, c, sin_factor));
        sol.u.push_back(qi == 0.0 ? std::numeric_limits<double>::infinity()
                                  : -sin_factor * std::log(qi));
    }
    sol.inv_ = pchip(sol.s, sol.q);
    return sol;
}

double closed_form_solution::q_at(double arc) const {
    if (arc <= 0.0) return 0.0;
    if (arc >= ell) return 1.0;
    return std::clamp(inv_(arc), 0.0, 1.0);
}

double closed_form_solution::u_at(double arc) const {
    const double qv = q_at(arc);
    if (qv == 0.0) return std::numeric_limits<double>::infinity();
    return -sin_factor * std::log(qv);
}

double closed_form_solution::z_at(double arc) const {
    return z_of_q(q_at(arc), alpha, c, sin_factor);
}

double closed_form_solution::mass() const { return z_of_q(0.0, alpha, c, sin_factor); }

double closed_form_solution::integrated_mass() const {
    const double ex = (1.0 - alpha) / alpha;
    const double pref =
        (alpha == 1.0) ? 1.0 / c : std::pow(sin_factor, ex) / (alpha * std::pow(c, 1.0 / alpha));
    // int u ds = int_0^1 (-sf ln q) s'(q) dq; the log endpoint is integrable
    return integrate(
        [&](double t) {
            const double sp = (alpha == 1.0) ? pref : pref * std::pow(bracket(t), ex);
            return -sin_factor * std::log(t) * sp;
        },
        0.0, 1.0, 1e-11);
}

double payoff_J(std::span<const double> u_cells, double L, double alpha, double c,
                double sin_factor) {
    check_params(alpha, c, sin_factor);
    if (!(L > 0.0)) throw std::invalid_argument("payoff_J: L must be positive");
    const std::size_t n = u_cells.size();
    if (n == 0) throw std::invalid_argument("payoff_J: empty density");
    const double h = L / static_cast<double>(n);

    // tail masses at cell edges
    std::vector<double> z(n + 1, 0.0);
    {
        compensated_sum tail;
        for (std::size_t i = n; i-- > 0;) {
            if (!(u_cells[i] >= 0.0)) throw std::invalid_argument("payoff_J: negative density");
            tail.add(u_cells[i] * h);
            z[i] = tail.value();
        }
    }
    compensated_sum light, cost;
    for (std::size_t i = 0; i < n; ++i) {
        light.add(h * sin_factor * (-std::expm1(-u_cells[i] / sin_factor)));
        cost.add(linear_power_integral(z[i], z[i + 1], u_cells[i], h, alpha));
    }
    return light.value() - c * cost.value();
}

std::vector<double> cell_average_density(const closed_form_solution& sol, double L, int N) {
    if (!(L > 0.0) || N < 1) throw std::invalid_argument("cell_average_density: bad grid");
    std::vector<double> out(static_cast<std::size_t>(N));
    const double h = L / N;
    double z_lo = sol.z_at(0.0);
    for (int i = 0; i < N; ++i) {
        const double z_hi = sol.z_at((i + 1) * h);
        out[static_cast<std::size_t>(i)] = std::max(0.0, (z_lo - z_hi) / h);
        z_lo = z_hi;
    }
    return out;
}

assembled_measure assemble_optimal_measure(double alpha, double c, double theta0,
                                           int cells_per_ray) {
    check_params(alpha, c, 1.0);
    if (!(theta0 > 0.0 && theta0 <= 0.5 * std::numbers::pi))
        throw std::domain_error("assemble_optimal_measure: theta0 must lie in (0, pi/2]");

    const double sf0 = std::sin(theta0);
    const closed_form_solution perp = solve_ray(alpha, c, 1.0);
    const closed_form_solution ground = solve_ray(alpha, c, sf0);

    assembled_measure out;
    out.ell1 = perp.ell;
    out.ell0 = ground.ell;

    auto make_ray = [&](const closed_form_solution& sol, double angle) {
        segment seg;
        seg.a = {0.0, 0.0};
        seg.b = {sol.ell * std::cos(angle), sol.ell * std::sin(angle)};
        const std::vector<double> cells = cell_average_density(sol, sol.ell, cells_per_ray);
        const double h = sol.ell / cells_per_ray;
        seg.pieces.reserve(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i)
            seg.pieces.push_back({i * h, (i + 1) * h, cells[i]});
        // last edge must land exactly on the segment length
        seg.pieces.back().t1 = sol.ell;
        return seg;
    };

    out.m.segments.push_back(make_ray(perp, theta0 + 0.5 * std::numbers::pi));
    out.m.segments.push_back(make_ray(ground, 0.0));

    const std::vector<double> cells1 = cell_average_density(perp, perp.ell, cells_per_ray);
    const std::vector<double> cells0 = cell_average_density(ground, ground.ell, cells_per_ray);
    out.payoff_reference = payoff_J(cells1, perp.ell, alpha, c, 1.0) +
                           payoff_J(cells0, ground.ell, alpha, c, sf0);

    const bool wide_enough =
        alpha >= 0.5 || std::cos(0.5 * std::numbers::pi - theta0) >= 1.0 - std::pow(2.0, 2.0 * alpha - 1.0);
    out.certified = wide_enough;
    return out;
}

void solution_to_csv(const closed_form_solution& sol, std::ostream& out) {
    out << "s,q,z,u\n";
    char line[160];
    for (std::size_t i = 0; i < sol.q.size(); ++i) {
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g\n", sol.s[i], sol.q[i], sol.z[i],
                      sol.u[i]);
        out << line;
    }
}

} // namespace branchlight
