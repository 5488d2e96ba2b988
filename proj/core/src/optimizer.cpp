#include "branchlight/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "branchlight/closed_form.hpp"
#include "branchlight/irrigation.hpp"
#include "branchlight/numerics.hpp"
#include "branchlight/sunlight.hpp"

namespace branchlight {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kDegenerateSlope = 1e-12; // rays this close to the light cast no shadow
constexpr double kProbeMax = 40.0;         // densities are log-divergent but cell
                                           // averages stay far below this
constexpr double kGold = 0.6180339887498949;

} // namespace

double default_family_length(double alpha, double c) {
    return 2.0 * std::pow(c, -1.0 / alpha);
}

void validate(const ray_family_config& cfg) {
    if (cfg.angles.empty()) throw std::invalid_argument("ray family: no rays");
    for (double a : cfg.angles)
        if (!(a >= 0.0 && a <= kPi + 1e-12))
            throw std::invalid_argument("ray family: angles must lie in [0, pi]");
    for (std::size_t i = 0; i < cfg.angles.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.angles.size(); ++j)
            if (std::abs(cfg.angles[i] - cfg.angles[j]) <= 1e-12)
                throw std::invalid_argument("ray family: angles must be distinct");
    if (cfg.cells < 1) throw std::invalid_argument("ray family: need at least one cell");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw std::invalid_argument("ray family: alpha must lie in (0, 1]");
    if (!(cfg.c > 0.0)) throw std::invalid_argument("ray family: c must be positive");
    if (!(cfg.theta0 > 0.0 && cfg.theta0 <= kHalfPi + 1e-12))
        throw std::invalid_argument("ray family: theta0 must lie in (0, pi/2]");
    if (cfg.max_passes < 1) throw std::invalid_argument("ray family: max_passes < 1");
    if (!(cfg.pass_tol > 0.0)) throw std::invalid_argument("ray family: pass_tol <= 0");
}

namespace {

double resolved_length(const ray_family_config& cfg) {
    return cfg.length > 0.0 ? cfg.length : default_family_length(cfg.alpha, cfg.c);
}

void check_densities(const ray_family_config& cfg,
                     const std::vector<std::vector<double>>& densities) {
    if (densities.size() != cfg.angles.size())
        throw std::invalid_argument("densities: one profile per ray required");
    for (const auto& d : densities) {
        if (static_cast<int>(d.size()) != cfg.cells)
            throw std::invalid_argument("densities: profile length must equal cell count");
        for (double x : d)
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument("densities: entries must be finite and >= 0");
    }
}

// ---------------------------------------------------------------------------
// coordinate-ascent engine
// ---------------------------------------------------------------------------

struct fan_state {
    // problem
    int m = 0, N = 0;
    double h = 0.0, L = 0.0;
    double alpha = 0.0, c = 0.0, theta0 = 0.0;
    std::vector<double> J;  // signed projection slope sin(angle - theta0)
    std::vector<double> aJ; // |J|

    // state
    std::vector<std::vector<double>> v; // cell densities
    std::vector<std::vector<double>> z; // tail mass at the N+1 cell edges

    // per-cell staleness tracking: a cell is re-probed from scratch whenever
    // its sunlit window or its own tail has changed materially
    std::vector<std::vector<char>> cold;
    std::vector<std::vector<double>> seen_E;
    std::vector<std::vector<double>> seen_tail;

    // scratch
    std::vector<double> pw;
    std::vector<double> brk;

    // diagnostics
    bool ascent_ok = true;
    double worst_drop = 0.0;

    fan_state(const ray_family_config& cfg) {
        m = static_cast<int>(cfg.angles.size());
        N = cfg.cells;
        L = resolved_length(cfg);
        h = L / N;
        alpha = cfg.alpha;
        c = cfg.c;
        theta0 = cfg.theta0;
        J.resize(m);
        aJ.resize(m);
        for (int r = 0; r < m; ++r) {
            J[r] = std::sin(cfg.angles[r] - theta0);
            aJ[r] = std::abs(J[r]);
        }
        v.assign(m, std::vector<double>(N, 0.0));
        z.assign(m, std::vector<double>(N + 1, 0.0));
        cold.assign(m, std::vector<char>(N, 1));
        seen_E.assign(m, std::vector<double>(N, -1.0));
        seen_tail.assign(m, std::vector<double>(N, -1.0));
        pw.resize(N + 2);
        brk.reserve(4 * m + 8);
    }

    void rebuild_z(int r) {
        compensated_sum tail;
        z[r][N] = 0.0;
        for (int i = N; i-- > 0;) {
            tail.add(v[r][i] * h);
            z[r][i] = tail.value();
        }
    }

    void set_densities(const std::vector<std::vector<double>>& dens) {
        v = dens;
        for (int r = 0; r < m; ++r) rebuild_z(r);
        for (int r = 0; r < m; ++r) {
            std::fill(cold[r].begin(), cold[r].end(), 1);
            std::fill(seen_E[r].begin(), seen_E[r].end(), -1.0);
            std::fill(seen_tail[r].begin(), seen_tail[r].end(), -1.0);
        }
    }

    double ray_mass(int r) const {
        compensated_sum s;
        for (double x : v[r]) s.add(x);
        return s.value() * h;
    }

    // full objective: saturating sunlight over the merged elementary grid
    // minus the summed ray costs
    double payoff() const {
        std::vector<double> edges;
        edges.reserve(static_cast<std::size_t>(m) * (N + 1));
        for (int r = 0; r < m; ++r) {
            if (aJ[r] < kDegenerateSlope) continue;
            for (int k = 0; k <= N; ++k) edges.push_back(k * h * J[r]);
        }
        std::sort(edges.begin(), edges.end());
        compensated_sum sun;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            const double len = edges[e + 1] - edges[e];
            if (len <= 1e-13 * (1.0 + std::abs(edges[e]))) continue;
            const double mid = 0.5 * (edges[e] + edges[e + 1]);
            double phi = 0.0;
            for (int r = 0; r < m; ++r) {
                if (aJ[r] < kDegenerateSlope) continue;
                const double t = mid / (h * J[r]);
                if (t >= 0.0 && t < N) {
                    const int idx = static_cast<int>(t);
                    phi += v[r][idx] / aJ[r];
                }
            }
            sun.add(len * (-std::expm1(-phi)));
        }
        compensated_sum cost;
        for (int r = 0; r < m; ++r)
            for (int i = 0; i < N; ++i)
                cost.add(linear_power_integral(z[r][i], z[r][i + 1], v[r][i], h, alpha));
        return sun.value() - c * cost.value();
    }

    // integral of exp(-Phi_other) over the projected window of cell (r, i)
    double window_E(int r, int i) {
        if (aJ[r] < kDegenerateSlope) return 0.0;
        const double e0 = i * h * J[r], e1 = (i + 1) * h * J[r];
        const double ylo = std::min(e0, e1), yhi = std::max(e0, e1);
        brk.clear();
        brk.push_back(ylo);
        brk.push_back(yhi);
        for (int rp = 0; rp < m; ++rp) {
            if (rp == r || aJ[rp] < kDegenerateSlope) continue;
            const double step = h * J[rp];
            double lo = ylo / step, hi = yhi / step;
            if (lo > hi) std::swap(lo, hi);
            int k0 = static_cast<int>(std::floor(lo)) + 1;
            int k1 = static_cast<int>(std::ceil(hi)) - 1;
            k0 = std::max(k0, 0);
            k1 = std::min(k1, N);
            for (int k = k0; k <= k1; ++k) {
                const double y = k * step;
                if (y > ylo && y < yhi) brk.push_back(y);
            }
        }
        std::sort(brk.begin(), brk.end());
        double E = 0.0;
        for (std::size_t e = 0; e + 1 < brk.size(); ++e) {
            const double len = brk[e + 1] - brk[e];
            if (len <= 0.0) continue;
            const double mid = 0.5 * (brk[e] + brk[e + 1]);
            double phi = 0.0;
            for (int rp = 0; rp < m; ++rp) {
                if (rp == r || aJ[rp] < kDegenerateSlope) continue;
                const double t = mid / (h * J[rp]);
                if (t >= 0.0 && t < N) {
                    const int idx = static_cast<int>(t);
                    phi += v[rp][idx] / aJ[rp];
                }
            }
            E += len * std::exp(-phi);
        }
        return E;
    }

    // restricted payoff along coordinate (r, i), up to an additive constant:
    // -E exp(-v/|J|) minus the cost of cells 0..i under the shifted tail
    double slice_f(int r, int i, double vt, double E) {
        const auto& zr = z[r];
        const auto& vr = v[r];
        const double delta = (vt - vr[i]) * h;
        const double ex = 1.0 + alpha;
        for (int j = 0; j <= i; ++j) pw[j] = std::pow(std::max(zr[j] + delta, 0.0), ex);
        pw[i + 1] = std::pow(zr[i + 1], ex);
        compensated_sum s;
        for (int j = 0; j <= i; ++j) {
            const double u = (j == i) ? vt : vr[j];
            if (u > 1e-300)
                s.add((pw[j] - pw[j + 1]) / (ex * u));
            else
                s.add(h * std::pow(std::max(zr[j] + delta, 0.0), alpha));
        }
        double f = -c * s.value();
        if (aJ[r] >= kDegenerateSlope) f -= E * std::exp(-vt / aJ[r]);
        return f;
    }

    // derivative of slice_f in the cell value
    double slice_fprime(int r, int i, double vt, double E) {
        const auto& zr = z[r];
        const auto& vr = v[r];
        const double delta = (vt - vr[i]) * h;
        for (int j = 0; j < i; ++j) pw[j] = std::pow(std::max(zr[j] + delta, 0.0), alpha);
        pw[i] = std::pow(std::max(zr[i] + delta, 0.0), alpha); // top edge of cell i
        compensated_sum s;
        for (int j = 0; j < i; ++j) {
            const double u = vr[j];
            if (u > 1e-300)
                s.add(h * (pw[j] - pw[j + 1]) / u);
            else
                s.add(h * h * alpha * std::pow(std::max(zr[j] + delta, 1e-300), alpha - 1.0));
        }
        // own cell: d/dv of the exact cell integral, stable for small v
        const double zb = zr[i + 1];
        double own;
        if (zb < 1e-300) {
            if (vt > 1e-300)
                own = alpha * std::pow(vt, alpha - 1.0) * std::pow(h, 1.0 + alpha) /
                      (1.0 + alpha);
            else // marginal cost of the first mass in an empty tail
                own = alpha < 1.0 ? std::numeric_limits<double>::infinity() : h * h / 2.0;
        } else if (vt * h <= 1e-6 * zb) {
            own = alpha * h * h / 2.0 * std::pow(zb + 0.5 * vt * h, alpha - 1.0);
        } else {
            const double ztop = zb + vt * h;
            const double A = std::pow(ztop, 1.0 + alpha), B = std::pow(zb, 1.0 + alpha);
            own = ((1.0 + alpha) * h * std::pow(ztop, alpha) * vt - (A - B)) /
                  ((1.0 + alpha) * vt * vt);
        }
        double fp = -c * (s.value() + own);
        if (aJ[r] >= kDegenerateSlope) fp += (E / aJ[r]) * std::exp(-vt / aJ[r]);
        return fp;
    }

    // secant search for a zero of the slice derivative inside (lo, hi);
    // returns false when it fails to settle there
    bool secant_refine(int r, int i, double E, double x_init, double lo, double hi,
                       double* out) {
        double x0 = std::clamp(x_init, lo, hi);
        double x1 = x0 + std::max(1e-6, 1e-4 * x0);
        if (x1 >= hi) x1 = 0.5 * (x0 + hi);
        if (x1 <= x0) x1 = x0 + 1e-9;
        double d0 = slice_fprime(r, i, x0, E);
        double d1 = slice_fprime(r, i, x1, E);
        for (int it = 0; it < 14; ++it) {
            if (d1 == d0) return false;
            const double xn = x1 - d1 * (x1 - x0) / (d1 - d0);
            if (!std::isfinite(xn) || xn <= lo || xn >= hi) return false;
            x0 = x1;
            d0 = d1;
            x1 = xn;
            if (std::abs(x1 - x0) <= 1e-12 * (1.0 + std::abs(x1))) {
                *out = x1;
                return true;
            }
            d1 = slice_fprime(r, i, x1, E);
        }
        return false;
    }

    double golden_refine(int r, int i, double E, double a, double b, int iters) {
        double x1 = b - kGold * (b - a), x2 = a + kGold * (b - a);
        double f1 = slice_f(r, i, x1, E), f2 = slice_f(r, i, x2, E);
        for (int it = 0; it < iters && b - a > 1e-12 * (1.0 + b); ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kGold * (b - a);
                f2 = slice_f(r, i, x2, E);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kGold * (b - a);
                f1 = slice_f(r, i, x1, E);
            }
        }
        return 0.5 * (a + b);
    }

    // `full` marks a global re-probe: only those re-baseline the staleness
    // references, so slow environment drift accumulates until it forces the
    // next global re-probe instead of being absorbed by warm refinements
    void commit(int r, int i, double vbest, double E, bool full) {
        const double delta = (vbest - v[r][i]) * h;
        if (delta != 0.0) {
            v[r][i] = vbest;
            for (int j = 0; j <= i; ++j) z[r][j] += delta;
        }
        cold[r][i] = 0;
        if (full) {
            seen_E[r][i] = E;
            seen_tail[r][i] = z[r][i + 1];
        }
    }

    // exact single-coordinate maximization with the zero candidate always in
    // contention; ties prefer the empty cell
    void solve_slice_full(int r, int i, double E) {
        const double cur = v[r][i];
        double probes[18];
        probes[0] = 0.0;
        probes[1] = cur;
        const double ratio = std::pow(kProbeMax / 1e-4, 1.0 / 15.0);
        double p = 1e-4;
        for (int k = 0; k < 16; ++k, p *= ratio) probes[2 + k] = p;
        double vals[18];
        int best = 0;
        for (int k = 0; k < 18; ++k) {
            vals[k] = slice_f(r, i, probes[k], E);
            if (vals[k] > vals[best]) best = k;
        }
        const double f0 = vals[0];

        // bracket around the best probe in sorted order
        int order[18];
        for (int k = 0; k < 18; ++k) order[k] = k;
        std::sort(order, order + 18, [&](int a, int b) { return probes[a] < probes[b]; });
        int pos = 0;
        for (int k = 0; k < 18; ++k)
            if (order[k] == best) pos = k;
        const double lo = pos > 0 ? probes[order[pos - 1]] : 0.0;
        const double hi = pos < 17 ? probes[order[pos + 1]] : 2.0 * kProbeMax;

        // golden section always lands on the bracket's maximum; derivative
        // chasing can settle on the wrong stationary point of these
        // non-concave slices, so it is reserved for warm re-refinement
        const double xr = golden_refine(r, i, E, lo, hi, 24);
        const double fr = slice_f(r, i, xr, E);

        double fbest = fr, vbest = xr;
        if (vals[best] > fbest) {
            fbest = vals[best];
            vbest = probes[best];
        }
        if (f0 > fbest) {
            fbest = f0;
            vbest = 0.0;
        }
        if (f0 >= fbest - 1e-13 * (1.0 + std::abs(fbest))) vbest = 0.0;
        commit(r, i, vbest, E, true);
    }

    // Optimistic O(1) screen for an empty cell: sunlight gain minus the exact
    // own-cell cost minus the exact cost of dragging the new flux across the
    // empty stretch below. Occupied prefix cells only add further cost, so a
    // non-positive maximum certifies that the cell stays empty; the marginal
    // cost at v = 0+ diverges for alpha < 1, so a derivative test at zero is
    // uninformative here and finite trial masses are required.
    bool empty_cell_can_gain(int r, int i, double E) {
        if (aJ[r] < kDegenerateSlope || E <= 0.0) return false;
        const double zb = std::max(z[r][i + 1], 0.0);
        const double ztiny = 1e-10 * (1.0 + z[r][0]);
        int n0 = 0;
        if (zb <= ztiny) {
            // first empty edge of the non-increasing tail profile
            int lo = 0, hi = i;
            while (lo < hi) {
                const int mid = (lo + hi) / 2;
                if (z[r][mid] <= ztiny)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            n0 = i - lo;
        }
        const double own0 = h * std::pow(zb, alpha);
        auto g = [&](double vt) {
            if (vt <= 0.0) return 0.0;
            const double own = linear_power_integral(zb + vt * h, zb, vt, h, alpha);
            const double stretch = n0 * h * std::pow(vt * h, alpha);
            return E * (-std::expm1(-vt / aJ[r])) - c * (own - own0 + stretch);
        };
        double probes[16], vals[16];
        const double ratio = std::pow(kProbeMax / 1e-4, 1.0 / 15.0);
        double p = 1e-4;
        int best = 0;
        for (int k = 0; k < 16; ++k, p *= ratio) {
            probes[k] = p;
            vals[k] = g(p);
            if (vals[k] > vals[best]) best = k;
        }
        if (vals[best] > 0.0) return true;
        // sharpen between the neighbours of the best probe
        double a = best > 0 ? probes[best - 1] : 0.0;
        double b = best < 15 ? probes[best + 1] : 2.0 * kProbeMax;
        double x1 = b - kGold * (b - a), x2 = a + kGold * (b - a);
        double f1 = g(x1), f2 = g(x2);
        for (int it = 0; it < 40 && b - a > 1e-12 * (1.0 + b); ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kGold * (b - a);
                f2 = g(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kGold * (b - a);
                f1 = g(x1);
            }
        }
        return g(0.5 * (a + b)) > 0.0;
    }

    // warm update: the environment of this cell is unchanged, so refine from
    // the current value instead of re-probing the whole axis
    void solve_slice_warm(int r, int i, double E) {
        const double cur = v[r][i];
        double xr;
        if (!secant_refine(r, i, E, cur, 0.0, 2.0 * kProbeMax, &xr)) {
            solve_slice_full(r, i, E);
            return;
        }
        const double fr = slice_f(r, i, xr, E);
        const double fc = slice_f(r, i, cur, E);
        const double f0 = slice_f(r, i, 0.0, E);
        double fbest = fr, vbest = xr;
        if (fc > fbest) {
            fbest = fc;
            vbest = cur;
        }
        if (f0 > fbest) {
            fbest = f0;
            vbest = 0.0;
        }
        if (f0 >= fbest - 1e-13 * (1.0 + std::abs(fbest))) vbest = 0.0;
        commit(r, i, vbest, E, false);
    }

    void solve_slice(int r, int i) {
        const double E = window_E(r, i);
        if (v[r][i] == 0.0) {
            // the screen is sound against the current state, cold or warm
            if (!empty_cell_can_gain(r, i, E)) {
                commit(r, i, 0.0, E, false);
                return;
            }
            solve_slice_full(r, i, E);
            return;
        }
        const bool warm = !cold[r][i] &&
                          std::abs(E - seen_E[r][i]) <= 1e-7 * (1.0 + seen_E[r][i]) &&
                          std::abs(z[r][i + 1] - seen_tail[r][i]) <=
                              1e-7 * (1.0 + seen_tail[r][i]);
        if (warm)
            solve_slice_warm(r, i, E);
        else
            solve_slice_full(r, i, E);
    }

    // full Gauss-Seidel passes until the payoff stops improving
    int ascend(int max_passes, double tol, bool* hit_cap) {
        double last = payoff();
        for (int pass = 1; pass <= max_passes; ++pass) {
            for (int r = 0; r < m; ++r) {
                for (int i = 0; i < N; ++i) solve_slice(r, i);
                rebuild_z(r); // bound incremental drift once per pass
            }
            const double cur = payoff();
            if (cur < last - 1e-9) {
                ascent_ok = false;
                worst_drop = std::min(worst_drop, cur - last);
            }
            if (cur - last < tol) {
                *hit_cap = false;
                return pass;
            }
            last = cur;
        }
        *hit_cap = true;
        return max_passes;
    }
};

struct start_outcome {
    std::vector<std::vector<double>> densities;
    double payoff = -std::numeric_limits<double>::infinity();
    int passes = 0;
    bool hit_cap = false;
    bool ascent_ok = true;
    double worst_drop = 0.0;
};

// ascent plus ray-transfer escape moves: a whole-ray transfer is accepted when
// it improves the payoff, or ties while strictly reducing the number of
// occupied rays; each acceptance is followed by a warm re-ascent
start_outcome run_start(const ray_family_config& cfg,
                        const std::vector<std::vector<double>>& init) {
    fan_state fan(cfg);
    fan.set_densities(init);
    start_outcome out;
    bool cap = false;
    out.passes += fan.ascend(cfg.max_passes, cfg.pass_tol, &cap);
    out.hit_cap = cap;
    double J = fan.payoff();

    const int max_transfers = 16 * fan.m * fan.m;
    int transfers = 0;
    while (!out.hit_cap) {
        bool accepted = false;
        const double scale = 1e-13 * (1.0 + std::abs(J));
        for (int r = 0; r < fan.m && !accepted; ++r) {
            if (fan.ray_mass(r) <= 0.0) continue;
            for (int rp = 0; rp < fan.m && !accepted; ++rp) {
                if (rp == r) continue;
                const bool target_occupied = fan.ray_mass(rp) > 0.0;
                fan_state trial = fan;
                for (int i = 0; i < fan.N; ++i) {
                    trial.v[rp][i] += trial.v[r][i];
                    trial.v[r][i] = 0.0;
                }
                trial.rebuild_z(r);
                trial.rebuild_z(rp);
                const double Jp = trial.payoff();
                if (Jp > J + scale || (Jp >= J - scale && target_occupied)) {
                    fan.v = std::move(trial.v);
                    fan.rebuild_z(r);
                    fan.rebuild_z(rp);
                    std::fill(fan.cold[r].begin(), fan.cold[r].end(), 1);
                    std::fill(fan.cold[rp].begin(), fan.cold[rp].end(), 1);
                    J = Jp;
                    accepted = true;
                    ++transfers;
                }
            }
        }
        if (!accepted) break;
        if (transfers > max_transfers) {
            out.hit_cap = true;
            break;
        }
        out.passes += fan.ascend(cfg.max_passes, cfg.pass_tol, &cap);
        out.hit_cap = out.hit_cap || cap;
        J = fan.payoff();
    }

    out.densities = fan.v;
    out.payoff = J;
    out.ascent_ok = fan.ascent_ok;
    out.worst_drop = fan.worst_drop;
    return out;
}

} // namespace

measure family_measure(const ray_family_config& cfg,
                       const std::vector<std::vector<double>>& densities) {
    validate(cfg);
    check_densities(cfg, densities);
    const double L = resolved_length(cfg);
    const double h = L / cfg.cells;
    measure out;
    for (std::size_t r = 0; r < cfg.angles.size(); ++r) {
        segment s;
        s.a = {0.0, 0.0};
        s.b = {L * std::cos(cfg.angles[r]), L * std::sin(cfg.angles[r])};
        for (int i = 0; i < cfg.cells; ++i) {
            const double t1 = (i + 1 == cfg.cells) ? L : (i + 1) * h;
            s.pieces.push_back({i * h, t1, densities[r][i]});
        }
        out.segments.push_back(std::move(s));
    }
    validate(out);
    return out;
}

payoff_report evaluate_payoff(const ray_family_config& cfg,
                              const std::vector<std::vector<double>>& densities) {
    validate(cfg);
    check_densities(cfg, densities);
    const double L = resolved_length(cfg);
    const double h = L / cfg.cells;

    payoff_report rep;
    rep.sunlight = sunlight_single(family_measure(cfg, densities), direction{cfg.theta0});
    compensated_sum cost;
    for (std::size_t r = 0; r < cfg.angles.size(); ++r) {
        ray_density_plan plan{cfg.angles[r], L, densities[r]};
        cost.add(ray_cost(plan, cfg.alpha, cfg.c));
    }
    rep.cost = cost.value();
    rep.payoff = rep.sunlight - rep.cost;

    rep.ray_masses.resize(cfg.angles.size());
    compensated_sum total;
    for (std::size_t r = 0; r < cfg.angles.size(); ++r) {
        compensated_sum s;
        for (double x : densities[r]) s.add(x);
        rep.ray_masses[r] = s.value() * h;
        total.add(rep.ray_masses[r]);
    }

    const double upper = cfg.theta0 + kHalfPi;
    int g = 0, u = 0;
    for (std::size_t r = 1; r < cfg.angles.size(); ++r) {
        if (std::abs(cfg.angles[r]) < std::abs(cfg.angles[g])) g = static_cast<int>(r);
        if (std::abs(cfg.angles[r] - upper) < std::abs(cfg.angles[u] - upper))
            u = static_cast<int>(r);
    }
    rep.ground_ray = g;
    rep.upper_ray = u;
    const double tot = total.value();
    if (tot > 0.0) {
        double on = rep.ray_masses[g];
        if (u != g) on += rep.ray_masses[u];
        rep.support_fraction = on / tot;
    }
    return rep;
}

family_result maximize_over_family(const ray_family_config& cfg) {
    validate(cfg);
    const double L = resolved_length(cfg);
    const int m = static_cast<int>(cfg.angles.size());
    const int N = cfg.cells;

    // start roster: random profiles per seed, then one closed-form start per
    // ray that casts a shadow
    std::vector<std::pair<std::string, std::vector<std::vector<double>>>> roster;
    for (auto seed : cfg.seeds) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 2.0);
        std::vector<std::vector<double>> init(m, std::vector<double>(N));
        for (int r = 0; r < m; ++r)
            for (int i = 0; i < N; ++i) init[r][i] = uni(rng);
        roster.emplace_back("seed" + std::to_string(seed), std::move(init));
    }
    for (int r = 0; r < m; ++r) {
        const double sf = std::abs(std::sin(cfg.angles[r] - cfg.theta0));
        if (sf < kDegenerateSlope) continue;
        std::vector<std::vector<double>> init(m, std::vector<double>(N, 0.0));
        const auto sol = solve_ray(cfg.alpha, cfg.c, sf);
        init[r] = cell_average_density(sol, L, N);
        roster.emplace_back("ray" + std::to_string(r), std::move(init));
    }
    if (roster.empty())
        throw std::invalid_argument(
            "ray family: no usable starts (no seeds and every ray is parallel to the light)");

    std::vector<start_outcome> outcomes(roster.size());
    for (std::size_t k = 0; k < roster.size(); ++k)
        outcomes[k] = run_start(cfg, roster[k].second);

    std::size_t win = 0;
    for (std::size_t k = 1; k < outcomes.size(); ++k)
        if (outcomes[k].payoff > outcomes[win].payoff) win = k;

    family_result res;
    res.densities = outcomes[win].densities;
    res.report = evaluate_payoff(cfg, res.densities);
    res.passes = outcomes[win].passes;
    res.converged = !outcomes[win].hit_cap && outcomes[win].ascent_ok;
    res.winning_start = static_cast<int>(win);
    for (const auto& [name, init] : roster) {
        (void)init;
        res.start_names.push_back(name);
    }
    for (const auto& o : outcomes) res.start_payoffs.push_back(o.payoff);
    res.worst_ascent_drop = outcomes[win].worst_drop;
    return res;
}

phototropism_report phototropism_compare(double alpha, double c, double theta0,
                                         double bend_angle) {
    if (!(bend_angle > 0.0 && bend_angle < kHalfPi))
        throw std::invalid_argument("phototropism: bend angle must lie in (0, pi/2)");
    if (!(theta0 > 0.0 && theta0 <= kHalfPi + 1e-12))
        throw std::invalid_argument("phototropism: theta0 must lie in (0, pi/2]");

    const auto sol = solve_ray(alpha, c, 1.0);
    const int N = 2048;
    const double ell = sol.ell;
    const auto cells = cell_average_density(sol, ell, N);
    const double upright = theta0 + kHalfPi;

    ray_density_plan plan{upright, ell, cells};
    const double cost = ray_cost(plan, alpha, c);

    auto stem_sunlight = [&](double angle) {
        measure stem;
        segment s;
        s.a = {0.0, 0.0};
        s.b = {ell * std::cos(angle), ell * std::sin(angle)};
        const double h = ell / N;
        for (int i = 0; i < N; ++i) {
            const double t1 = (i + 1 == N) ? ell : (i + 1) * h;
            s.pieces.push_back({i * h, t1, cells[i]});
        }
        stem.segments.push_back(std::move(s));
        validate(stem);
        return sunlight_single(stem, direction{theta0});
    };

    phototropism_report rep;
    rep.straight_payoff = stem_sunlight(upright) - cost;
    rep.bent_payoff = stem_sunlight(upright - bend_angle) - cost;
    rep.difference = rep.straight_payoff - rep.bent_payoff;
    return rep;
}

} // namespace branchlight
