// Acceptance gate: one line per criterion, [PASS]/[FAIL], pinned tolerances.
// Each criterion also enforces its own wall-clock budget.

#include <branchlight/closed_form.hpp>
#include <branchlight/geometry.hpp>
#include <branchlight/irrigation.hpp>
#include <branchlight/numerics.hpp>
#include <branchlight/optimizer.hpp>
#include <branchlight/sunlight.hpp>
#include <branchlight/theory.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace branchlight;

namespace {

const double kPi = std::acos(-1.0);

struct outcome {
    bool pass = false;
    std::string detail;
};

double now_seconds() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
// Linear-cost single ray solves in closed form.
outcome criterion_closed_form_linear() {
    closed_form_solution sol = solve_ray(1.0, 0.5, 1.0);
    double worst_u = 0.0;
    for (int i = 1; i <= 1990; ++i) {
        const double s = i * 1e-3;
        worst_u = std::max(worst_u, std::abs(sol.u_at(s) + std::log(0.5 * s)));
    }
    const double err_ell = std::abs(sol.ell - 2.0);
    const double err_mass = std::abs(sol.mass() - 2.0);
    const double err_quad = std::abs(sol.integrated_mass() - 2.0);
    const bool pass =
        err_ell <= 1e-9 && worst_u <= 1e-9 && err_mass <= 1e-9 && err_quad <= 1e-9;
    return {pass, fmt("ell err %.2e, sup|u+ln(s/2)| %.2e, mass err %.2e/%.2e",
                      err_ell, worst_u, err_mass, err_quad)};
}

// ---------------------------------------------------------------- criterion 2
// Residuals of the dual system, probed by independent five-point stencils on
// the closed-form maps: the tail ODE in the dual variable (tolerance 1e-6)
// and the dual slope law along arclength (tolerance 1e-5).
outcome criterion_dual_residuals() {
    const double alphas[] = {0.5, 0.6, 0.75, 0.9, 1.0};
    const double cs[] = {0.5, 1.0, 2.0};
    double worst_tail = 0.0, worst_slope = 0.0;
    const double hq = 1e-3;
    for (double alpha : alphas)
        for (double c : cs)
            for (int iq = 0; iq <= 40; ++iq) {
                const double q = 0.05 + 0.9 * iq / 40.0;
                std::vector<double> ztab(5), stab(5);
                for (int j = 0; j < 5; ++j) {
                    const double qj = q + (j - 2) * hq;
                    ztab[j] = z_of_q(qj, alpha, c, 1.0);
                    stab[j] = s_of_q(qj, alpha, c, 1.0);
                }
                const double dzdq = central_diff5(ztab, 2, hq);
                const double dsdq = central_diff5(stab, 2, hq);
                const double z = ztab[2];

                // dz/dq = z^{1-alpha} ln q / (c alpha), z(1) = 0
                const double tail_res =
                    std::abs(dzdq - std::pow(z, 1.0 - alpha) * std::log(q) / (c * alpha));
                // dq/ds = c alpha z^{alpha-1}  <=>  ds/dq * c alpha z^{alpha-1} = 1
                const double slope_res =
                    std::abs(dsdq * c * alpha * std::pow(z, alpha - 1.0) - 1.0);
                worst_tail = std::max(worst_tail, tail_res);
                worst_slope = std::max(worst_slope, slope_res);
            }
    const bool pass = worst_tail <= 1e-6 && worst_slope <= 1e-5;
    return {pass, fmt("tail-ODE residual %.2e (<=1e-6), slope residual %.2e (<=1e-5)",
                      worst_tail, worst_slope)};
}

// ---------------------------------------------------------------- criterion 3
// Stationarity of the single-ray payoff at the closed-form profile, and a
// strict win over the equal-mass constant profile.
outcome criterion_stationarity() {
    const double alpha = 0.75, c = 1.0;
    closed_form_solution sol = solve_ray(alpha, c, 1.0, 4096);
    const double ell = sol.ell;
    const double a = 0.1 * ell, b = 0.9 * ell;

    auto phi = [&](double s, int k) {
        if (s <= a || s >= b) return 0.0;
        return std::sin(k * kPi * (s - a) / (b - a));
    };
    // integral of the bump from s to the tip, in closed form
    auto phi_tail = [&](double s, int k) {
        const double w = (b - a) / (k * kPi);
        if (s >= b) return 0.0;
        const double lo = std::max(s, a);
        return w * (std::cos(k * kPi * (lo - a) / (b - a)) - std::cos(k * kPi));
    };
    auto payoff_at = [&](double eps, int k) {
        auto f = [&](double s) {
            const double u = sol.u_at(s) + eps * phi(s, k);
            const double z = std::max(sol.z_at(s) + eps * phi_tail(s, k), 0.0);
            return (1.0 - std::exp(-u)) - c * std::pow(z, alpha);
        };
        return integrate(f, 0.0, a, 1e-12) + integrate(f, a, b, 1e-12) +
               integrate(f, b, ell, 1e-12);
    };

    const double eps = 1e-4;
    double worst = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double d = (payoff_at(eps, k) - payoff_at(-eps, k)) / (2.0 * eps);
        worst = std::max(worst, std::abs(d));
    }

    const double j_star = payoff_at(0.0, 1);
    const double v0 = sol.mass() / ell;
    const double j_const = ell * (1.0 - std::exp(-v0)) -
                           c * std::pow(v0, alpha) * std::pow(ell, 1.0 + alpha) /
                               (1.0 + alpha);
    const bool pass = worst <= 1e-5 && j_star > j_const;
    return {pass, fmt("sup directional derivative %.2e (<=1e-5), payoff %.8f vs "
                      "constant %.8f",
                      worst, j_star, j_const)};
}

// ---------------------------------------------------------------- criterion 4
// Sign sweeps of the bend margin and the concentration ratio.
outcome criterion_margin_sweeps() {
    const int G = 64;
    auto sweep_min = [&](double alpha, bool restricted) {
        const double peak = bypass_ratio_peak(alpha);
        double mn = 1e300;
        for (int i = 0; i < G; ++i) {
            const double lam = (i + 0.5) / G;
            for (int j = 0; j < G; ++j) {
                const double ta = j * (kPi / 2) / (G - 1);
                for (int k = 0; k < G; ++k) {
                    const double tb = k * (kPi / 2) / (G - 1);
                    if (restricted && std::cos(tb) < peak) continue;
                    mn = std::min(mn, bypass_margin(lam, ta, tb, alpha));
                }
            }
        }
        return mn;
    };

    double worst_wide = 1e300;
    for (double alpha = 0.5; alpha <= 1.0 + 1e-12; alpha += 0.05)
        worst_wide = std::min(worst_wide, sweep_min(alpha, false));

    double worst_restricted = 1e300;
    for (double alpha = 0.1; alpha <= 0.45 + 1e-12; alpha += 0.05)
        worst_restricted = std::min(worst_restricted, sweep_min(alpha, true));

    // a certified negative margin must exist off the restricted cone
    double best_negative = 1e300;
    {
        const double alpha = 0.2, peak = bypass_ratio_peak(alpha);
        for (int i = 0; i < 400; ++i) {
            const double lam = (i + 0.5) / 400.0;
            for (int k = 0; k < 400; ++k) {
                const double tb = k * (kPi / 2) / 399.0;
                if (std::cos(tb) >= peak) continue;
                for (double ta : {0.0, 0.4, 0.7893})
                    best_negative = std::min(best_negative,
                                             bypass_margin(lam, ta, tb, alpha));
            }
        }
    }

    // on the flat side of the exponent range the ratio is pinched between zero
    // and its midpoint value (beyond alpha = 1/2 the midpoint is a minimum and
    // the bound is carried by a different inequality, so it is not swept here)
    double worst_ratio_gap = -1e300, worst_ratio_min = 1e300;
    for (double alpha : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5}) {
        const double peak = bypass_ratio_peak(alpha);
        for (int i = 1; i < 2000; ++i) {
            const double val = bypass_ratio(i / 2000.0, alpha).value;
            worst_ratio_gap = std::max(worst_ratio_gap, val - peak);
            worst_ratio_min = std::min(worst_ratio_min, val);
        }
    }

    const bool pass = worst_wide >= -1e-12 && worst_restricted >= -1e-12 &&
                      best_negative < -1e-6 && worst_ratio_gap <= 1e-12 &&
                      worst_ratio_min >= -1e-12;
    return {pass,
            fmt("min margin %.2e wide / %.2e restricted, negative witness %.4f, "
                "ratio-peak gap %.2e, ratio min %.2e",
                worst_wide, worst_restricted, best_negative, worst_ratio_gap,
                worst_ratio_min)};
}

// ---------------------------------------------------------------- criterion 5
// The multi-bend remainder: exact cancellation for one bend, nonnegative on
// random admissible collinear configurations.
outcome criterion_remainder_sweep() {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> U(0.0, 1.0);

    double worst_single = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double ang = kPi * U(rng);
        const vec2 dir{std::cos(ang), std::sin(ang)};
        const double r1 = 0.2 + U(rng), r2 = r1 + 0.1 + U(rng);
        std::vector<vec2> path{r1 * dir, r2 * dir};
        std::vector<double> kap{0.1 + U(rng)};
        const vec2 p_star = (r2 + 0.3 + U(rng)) * dir;
        worst_single = std::max(
            worst_single, std::abs(bypass_remainder(p_star, path, kap, 0.1 + 0.9 * U(rng))));
    }

    double worst_multi = 1e300;
    for (int t = 0; t < 10000; ++t) {
        const int n = 1 + static_cast<int>(U(rng) * 6.0);
        const double alpha = 0.1 + 0.9 * U(rng);
        const double ang = kPi * U(rng);
        const vec2 dir{std::cos(ang), std::sin(ang)};
        double off = 0.2 + U(rng);
        std::vector<vec2> path;
        std::vector<double> kap;
        for (int j = 0; j <= n; ++j) {
            path.push_back(off * dir);
            off += 0.1 + U(rng);
            if (j < n) kap.push_back(0.1 + U(rng));
        }
        const vec2 p_star = (off + 0.5) * dir;
        worst_multi = std::min(worst_multi, bypass_remainder(p_star, path, kap, alpha));
    }

    const bool pass = worst_single <= 1e-12 && worst_multi >= -1e-12;
    return {pass, fmt("sup|single-bend| %.2e (<=1e-12), min multi-bend %.2e (>=-1e-12)",
                      worst_single, worst_multi)};
}

// ---------------------------------------------------------------- criterion 6
// Flat-cost regime: circle constant, then the two-sided verdict.
outcome criterion_flat_regime() {
    direction_gain g = alpha_zero_K(uniform_field(8192), 1440);
    const double k_err = std::abs(g.K - 4.0);

    alpha_zero_report up = alpha_zero_verdict(g.K, 1.0, 5.0, 10.0);
    const double witness_ref = ((1.0 - std::exp(-5.0)) * g.K - 1.0) * 10.0;
    const double wit_err = std::abs(up.witness_value - witness_ref);

    alpha_zero_report down = alpha_zero_verdict(g.K, 4.5, 5.0, 10.0);

    const bool pass = k_err <= 1e-6 && up.verdict == alpha_zero_kind::unbounded &&
                      wit_err <= 1e-9 && down.verdict == alpha_zero_kind::zero &&
                      down.upper_bound <= 0.0;
    return {pass, fmt("|K-4| %.2e (<=1e-6), witness err %.2e (<=1e-9), verdicts %s/%s",
                      k_err, wit_err, up.verdict_name.c_str(), down.verdict_name.c_str())};
}

// ---------------------------------------------------------------- criterion 7
// Transport optimizer vs an independent dense-grid oracle on tiny instances.
namespace oracle {

struct assignment {
    int total_nodes = 0;           // root + atoms + used branch points
    std::vector<int> parent;       // indexed by node, parent[0] unused
};

double tree_cost_at(const assignment& asg, std::span<const atom> atoms,
                    std::span<const vec2> bp, double alpha) {
    const int n = static_cast<int>(atoms.size());
    const int m = asg.total_nodes;
    auto pos = [&](int v) -> vec2 {
        if (v == 0) return {0.0, 0.0};
        if (v <= n) return atoms[v - 1].pos;
        return bp[v - n - 1];
    };
    // subtree atom mass below each node
    std::vector<double> flux(m, 0.0);
    for (int a = 1; a <= n; ++a) {
        int v = a;
        while (v != 0) {
            flux[v] += atoms[a - 1].mass;
            v = asg.parent[v];
        }
    }
    double cost = 0.0;
    for (int v = 1; v < m; ++v)
        if (flux[v] > 0.0)
            cost += std::pow(flux[v], alpha) * (pos(v) - pos(asg.parent[v])).norm();
    return cost;
}

// all rooted parent assignments over atoms plus `steiner` branch points,
// filtered to trees where every branch point merges at least two children
std::vector<assignment> enumerate(int n, int steiner) {
    const int m = 1 + n + steiner;
    std::vector<assignment> out;
    std::vector<int> parent(m, -1);
    std::function<void(int)> rec = [&](int v) {
        if (v == m) {
            // acyclic and rooted?
            for (int s = 1; s < m; ++s) {
                int hops = 0, w = s;
                while (w != 0 && hops <= m) {
                    w = parent[w];
                    ++hops;
                }
                if (w != 0) return;
            }
            std::vector<int> kids(m, 0);
            for (int s = 1; s < m; ++s) ++kids[parent[s]];
            for (int s = n + 1; s < m; ++s)
                if (kids[s] < 2) return; // branch point must branch
            assignment a;
            a.total_nodes = m;
            a.parent = parent;
            out.push_back(a);
            return;
        }
        for (int p = 0; p < m; ++p) {
            if (p == v) continue;
            parent[v] = p;
            rec(v + 1);
        }
        parent[v] = -1;
    };
    rec(1);
    return out;
}

// coordinate descent over branch-point positions: per-point local grid
// minimization with a slowly shrinking window (alternating minimization can
// lag the window in a diagonal valley, hence the gentle 0.7 factor)
double refine(const assignment& asg, std::span<const atom> atoms,
              std::vector<vec2> bp, double alpha, double window) {
    const int steiner = static_cast<int>(bp.size());
    double scale = window;
    for (int round = 0; round < 60; ++round) {
        for (int sweep = 0; sweep < 3; ++sweep)
            for (int j = 0; j < steiner; ++j) {
                const vec2 center = bp[j];
                vec2 arg = center;
                double local = 1e300;
                const int G = 16;
                for (int ix = 0; ix <= G; ++ix)
                    for (int iy = 0; iy <= G; ++iy) {
                        bp[j] = {center.x + scale * (2.0 * ix / G - 1.0),
                                 center.y + scale * (2.0 * iy / G - 1.0)};
                        const double c = tree_cost_at(asg, atoms, bp, alpha);
                        if (c < local) {
                            local = c;
                            arg = bp[j];
                        }
                    }
                bp[j] = arg;
            }
        scale *= 0.7;
    }
    return tree_cost_at(asg, atoms, bp, alpha);
}

double best_cost(std::span<const atom> atoms, double alpha) {
    const int n = static_cast<int>(atoms.size());
    vec2 lo{0.0, 0.0}, hi{0.0, 0.0}, centroid{0.0, 0.0};
    for (const auto& a : atoms) {
        lo = {std::min(lo.x, a.pos.x), std::min(lo.y, a.pos.y)};
        hi = {std::max(hi.x, a.pos.x), std::max(hi.y, a.pos.y)};
        centroid = centroid + (1.0 / n) * a.pos;
    }
    const double span = std::max({hi.x - lo.x, hi.y - lo.y, 0.5});
    lo = {lo.x - 0.25 * span, lo.y - 0.25 * span};
    hi = {hi.x + 0.25 * span, hi.y + 0.25 * span};

    double best = 1e300;
    for (int steiner = 0; steiner <= std::max(0, n - 1) && steiner <= 2; ++steiner) {
        for (const assignment& asg : enumerate(n, steiner)) {
            if (steiner == 0) {
                best = std::min(best, tree_cost_at(asg, atoms, {}, alpha));
                continue;
            }
            // joint coarse scan over the padded box picks the basin; a
            // per-point scheme started from one position can lock into the
            // wrong valley, so all branch points are scanned together
            const int P = (steiner == 1) ? 40 : 10;
            const auto grid_pt = [&](int ix, int iy) -> vec2 {
                return {lo.x + (hi.x - lo.x) * ix / P,
                        lo.y + (hi.y - lo.y) * iy / P};
            };
            std::vector<vec2> bp(steiner), seed(steiner);
            double coarse = 1e300;
            const int cells = (P + 1) * (P + 1);
            const int combos = (steiner == 1) ? cells : cells * cells;
            for (int t = 0; t < combos; ++t) {
                int rem = t;
                for (int j = 0; j < steiner; ++j) {
                    const int cell = rem % cells;
                    rem /= cells;
                    bp[j] = grid_pt(cell % (P + 1), cell / (P + 1));
                }
                const double c = tree_cost_at(asg, atoms, bp, alpha);
                if (c < coarse) {
                    coarse = c;
                    seed = bp;
                }
            }
            const double spacing = std::max(hi.x - lo.x, hi.y - lo.y) / P;
            best = std::min(best, refine(asg, atoms, seed, alpha, spacing));
            best = std::min(best,
                            refine(asg, atoms,
                                   std::vector<vec2>(steiner, centroid), alpha,
                                   std::max(hi.x - lo.x, hi.y - lo.y)));
        }
    }
    return best;
}

} // namespace oracle

outcome criterion_transport_oracle() {
    const std::vector<std::vector<atom>> configs = {
        {{{3.0, 4.0}, 1.0}},
        {{{1.0, 0.2}, 0.5}, {{1.0, -0.2}, 0.5}},
        {{{0.9, 0.1}, 0.4}, {{1.1, 0.5}, 0.35}, {{0.7, 0.8}, 0.25}},
    };
    double worst_rel = 0.0;
    for (const auto& atoms : configs)
        for (double alpha : {0.5, 0.75, 0.9}) {
            const double heur = optimal_tree_bruteforce(atoms, alpha).cost;
            const double ref = oracle::best_cost(atoms, alpha);
            worst_rel = std::max(worst_rel, std::abs(heur - ref) / ref);
        }

    // at the linear end the star is exactly optimal
    double star = 0.0;
    for (const auto& a : configs[2]) star += a.mass * a.pos.norm();
    const double lin_err =
        std::abs(optimal_tree_bruteforce(configs[2], 1.0).cost - star);

    const bool pass = worst_rel <= 1e-6 && lin_err <= 1e-9;
    return {pass, fmt("worst oracle gap %.2e rel (<=1e-6), linear star err %.2e (<=1e-9)",
                      worst_rel, lin_err)};
}

// ---------------------------------------------------------------- criterion 8
// Desk-scale two-ray confirmation on the ray family.
outcome criterion_desk_scale() {
    // part A: free 8-ray fan concentrates on the predicted pair
    ray_family_config wide;
    wide.alpha = 0.75;
    wide.c = 1.0;
    wide.theta0 = kPi / 4;
    wide.angles.clear();
    for (int k = 0; k < 8; ++k) wide.angles.push_back(k * kPi / 8);
    wide.cells = 256;
    family_result spread = maximize_over_family(wide);
    const double frac = spread.report.support_fraction;

    // part B: two-ray family at fine resolution matches the closed form
    ray_family_config pair = wide;
    pair.angles = {0.0, wide.theta0 + kPi / 2};
    pair.cells = 8192;
    pair.seeds.clear(); // deterministic per-ray starts only
    family_result res = maximize_over_family(pair);

    const double L = default_family_length(pair.alpha, pair.c);
    const double h = L / pair.cells;
    double sup_dev = 0.0;
    for (int r = 0; r < 2; ++r) {
        const double sf = (r == 0) ? std::sin(pair.theta0) : 1.0;
        closed_form_solution sol = solve_ray(pair.alpha, pair.c, sf, 4096);
        for (int i = 0; i < pair.cells; ++i) {
            const double s = (i + 0.5) * h;
            const double ref = (s < sol.ell) ? sol.u_at(s) : 0.0;
            sup_dev = std::max(sup_dev, std::abs(res.densities[r][i] - ref));
        }
    }

    const bool pass = frac >= 0.99 && sup_dev <= 2e-3 && spread.converged &&
                      res.converged;
    return {pass, fmt("support fraction %.6f (>=0.99), sup density dev %.2e (<=2e-3)",
                      frac, sup_dev)};
}

// ---------------------------------------------------------------- criterion 9
// A straight upright stem beats bent variants, strictly.
outcome criterion_phototropism() {
    std::string vals;
    bool pass = true;
    for (double bend : {kPi / 12, kPi / 6, kPi / 4}) {
        phototropism_report rep = phototropism_compare(1.0, 0.5, kPi / 4, bend);
        pass = pass && rep.difference > 0.0;
        vals += fmt(" %.3e", rep.difference);
    }
    return {pass, "straight-minus-bent payoffs:" + vals};
}

// --------------------------------------------------------------- criterion 10
// Projection conservation laws on random measures.
outcome criterion_conservation() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> U(0.0, 1.0);

    auto random_measure = [&]() {
        measure m;
        const int ns = 1 + static_cast<int>(U(rng) * 4);
        for (int i = 0; i < ns; ++i) {
            vec2 a{4.0 * U(rng) - 2.0, 2.0 * U(rng)};
            const double ang = kPi * U(rng), len = 0.2 + 1.5 * U(rng);
            vec2 b = a + vec2{len * std::cos(ang), len * std::sin(ang)};
            if (b.y < 0.0) b.y = 0.0;
            segment s;
            s.a = a;
            s.b = b;
            const double L = (b - a).norm();
            const int np = 1 + static_cast<int>(U(rng) * 3);
            double t = 0.0;
            for (int p = 0; p < np; ++p) {
                const double t1 = (p + 1 == np) ? L : t + (L - t) * U(rng);
                s.pieces.push_back({t, t1, 2.0 * U(rng)});
                t = t1;
            }
            m.segments.push_back(s);
        }
        const int na = static_cast<int>(U(rng) * 3);
        for (int i = 0; i < na; ++i)
            m.atoms.push_back({{4.0 * U(rng) - 2.0, 2.0 * U(rng)}, U(rng)});
        return m;
    };

    double worst_mass = 0.0, worst_shift = 0.0;
    for (int t = 0; t < 1000; ++t) {
        measure m = random_measure();
        direction n{0.05 + (kPi - 0.1) * U(rng)};

        projected_density pd = project(m, n);
        const double ref = total_mass(m);
        worst_mass = std::max(worst_mass,
                              std::abs(pd.total() - ref) / (1.0 + std::abs(ref)));

        const double shift = 3.0 * (U(rng) - 0.5);
        measure moved = m;
        for (auto& s : moved.segments) {
            s.a = s.a + shift * n.unit();
            s.b = s.b + shift * n.unit();
        }
        for (auto& a : moved.atoms) a.pos = a.pos + shift * n.unit();
        projected_density qd = project(moved, n);

        if (qd.breakpoints.size() != pd.breakpoints.size() ||
            qd.values.size() != pd.values.size()) {
            worst_shift = 1.0;
            continue;
        }
        for (std::size_t i = 0; i < pd.breakpoints.size(); ++i)
            worst_shift = std::max(
                worst_shift, std::abs(pd.breakpoints[i] - qd.breakpoints[i]) /
                                 (1.0 + std::abs(pd.breakpoints[i])));
        for (std::size_t i = 0; i < pd.values.size(); ++i)
            worst_shift = std::max(worst_shift,
                                   std::abs(pd.values[i] - qd.values[i]) /
                                       (1.0 + std::abs(pd.values[i])));
    }

    const bool pass = worst_mass <= 1e-12 && worst_shift <= 1e-12;
    return {pass, fmt("worst mass defect %.2e, worst shift defect %.2e (both <=1e-12)",
                      worst_mass, worst_shift)};
}

} // namespace

int main() {
    struct row {
        int id;
        const char* label;
        double budget_seconds;
        outcome (*run)();
    };
    const row rows[] = {
        {1, "linear-cost ray closed form", 1.0, criterion_closed_form_linear},
        {2, "dual-system residuals", 10.0, criterion_dual_residuals},
        {3, "single-ray stationarity", 10.0, criterion_stationarity},
        {4, "bend-margin sign sweeps", 30.0, criterion_margin_sweeps},
        {5, "multi-bend remainder sweep", 10.0, criterion_remainder_sweep},
        {6, "flat-regime trichotomy", 5.0, criterion_flat_regime},
        {7, "transport grid oracle", 60.0, criterion_transport_oracle},
        {8, "desk-scale two-ray support", 300.0, criterion_desk_scale},
        {9, "phototropism sign", 10.0, criterion_phototropism},
        {10, "projection conservation laws", 10.0, criterion_conservation},
    };

    bool all = true;
    for (const row& r : rows) {
        const double t0 = now_seconds();
        outcome o;
        try {
            o = r.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = now_seconds() - t0;
        const bool in_budget = dt < r.budget_seconds;
        const bool pass = o.pass && in_budget;
        all = all && pass;
        std::printf("[%s] criterion %2d: %s — %s (%.1fs%s)\n", pass ? "PASS" : "FAIL",
                    r.id, r.label, o.detail.c_str(), dt,
                    in_budget ? "" : fmt(", over %gs budget", r.budget_seconds).c_str());
        std::fflush(stdout);
    }
    std::printf("%s\n", all ? "all criteria passed" : "criteria FAILED");
    return all ? 0 : 1;
}
