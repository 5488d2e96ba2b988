// Command-line front door: reproducible experiments and figure emission on
// top of the core library. Radians everywhere; 12 significant digits; exit 0
// on success, 1 on input errors, 2 on numerical non-convergence.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "branchlight/closed_form.hpp"
#include "branchlight/geometry.hpp"
#include "branchlight/irrigation.hpp"
#include "branchlight/optimizer.hpp"
#include "branchlight/sunlight.hpp"
#include "branchlight/theory.hpp"

namespace {

constexpr double kPi = 3.141592653589793;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    return out;
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int run_sunlight(const std::string& measure_path, double theta0,
                 const std::string& field_path) {
    const auto m = branchlight::load_measure(measure_path);
    double value = 0.0;
    if (!field_path.empty())
        value = branchlight::sunlight_multi(m, branchlight::load_field(field_path));
    else
        value = branchlight::sunlight_single(m, branchlight::direction{theta0});
    std::cout << "sunlight=" << fmt(value) << "\n";
    return 0;
}

int run_cost(const std::string& tree_path, double alpha) {
    const auto t = branchlight::load_tree(tree_path);
    std::cout << "cost=" << fmt(branchlight::tree_cost(t, alpha)) << "\n";
    return 0;
}

int run_closed_form(double alpha, double c, double theta0, const std::string& csv0,
                    const std::string& csv1) {
    const auto sol1 = branchlight::solve_ray(alpha, c, 1.0);
    const auto sol0 = branchlight::solve_ray(alpha, c, std::sin(theta0));
    // net payoff of each profile, via fine staircase averages
    const int N = 4096;
    const double p1 = branchlight::payoff_J(
        branchlight::cell_average_density(sol1, sol1.ell, N), sol1.ell, alpha, c, 1.0);
    const double p0 = branchlight::payoff_J(
        branchlight::cell_average_density(sol0, sol0.ell, N), sol0.ell, alpha, c,
        std::sin(theta0));
    std::cout << "ell0=" << fmt(sol0.ell) << "\n";
    std::cout << "ell1=" << fmt(sol1.ell) << "\n";
    std::cout << "mass0=" << fmt(sol0.mass()) << "\n";
    std::cout << "mass1=" << fmt(sol1.mass()) << "\n";
    std::cout << "payoff0=" << fmt(p0) << "\n";
    std::cout << "payoff1=" << fmt(p1) << "\n";
    std::cout << "payoff_total=" << fmt(p0 + p1) << "\n";
    if (!csv0.empty()) {
        auto out = open_out(csv0);
        branchlight::solution_to_csv(sol0, out);
    }
    if (!csv1.empty()) {
        auto out = open_out(csv1);
        branchlight::solution_to_csv(sol1, out);
    }
    return 0;
}

void write_fan_csv(const std::string& path, const branchlight::ray_family_config& cfg,
                   const std::vector<std::vector<double>>& dens, double L) {
    auto out = open_out(path);
    out << "ray,angle,cell,s0,s1,density\n";
    const double h = L / cfg.cells;
    for (std::size_t r = 0; r < cfg.angles.size(); ++r)
        for (int i = 0; i < cfg.cells; ++i)
            out << r << ',' << fmt(cfg.angles[r]) << ',' << i << ',' << fmt(i * h) << ','
                << fmt((i + 1) * h) << ',' << fmt(dens[r][i]) << "\n";
}

// Tapered-ribbon rendering of the fan: each ray drawn with width proportional
// to its cell density, plus an arrow marking the light direction.
void write_fan_svg(const std::string& path, const branchlight::ray_family_config& cfg,
                   const std::vector<std::vector<double>>& dens, double L) {
    const double W = 720.0, H = 560.0, pad = 40.0;
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    for (double a : cfg.angles) {
        xmin = std::min(xmin, L * std::cos(a));
        xmax = std::max(xmax, L * std::cos(a));
        ymin = std::min(ymin, L * std::sin(a));
        ymax = std::max(ymax, L * std::sin(a));
    }
    const double sun_x = 1.2 * L * std::cos(cfg.theta0),
                 sun_y = 1.2 * L * std::sin(cfg.theta0);
    xmin = std::min(xmin, sun_x);
    xmax = std::max(xmax, sun_x);
    ymax = std::max(ymax, sun_y);
    const double scale =
        std::min((W - 2 * pad) / std::max(xmax - xmin, 1e-9),
                 (H - 2 * pad) / std::max(ymax - ymin, 1e-9));
    auto X = [&](double x) { return pad + (x - xmin) * scale; };
    auto Y = [&](double y) { return H - pad - (y - ymin) * scale; };

    double vmax = 0.0;
    for (const auto& d : dens)
        for (double v : d) vmax = std::max(vmax, v);
    const double wscale = vmax > 0.0 ? 0.05 * L * scale / vmax : 0.0;

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const double h = L / cfg.cells;
    for (std::size_t r = 0; r < cfg.angles.size(); ++r) {
        const double ca = std::cos(cfg.angles[r]), sa = std::sin(cfg.angles[r]);
        out << "<line x1=\"" << fmt(X(0)) << "\" y1=\"" << fmt(Y(0)) << "\" x2=\""
            << fmt(X(L * ca)) << "\" y2=\"" << fmt(Y(L * sa))
            << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
        // staircase ribbon outline: up one side, back down the other
        std::ostringstream pts;
        for (int i = 0; i < cfg.cells; ++i) {
            const double w = dens[r][i] * wscale;
            const double s0 = i * h, s1 = (i + 1) * h;
            pts << fmt(X(s0 * ca) - w * sa) << ',' << fmt(Y(s0 * sa) - w * ca) << ' '
                << fmt(X(s1 * ca) - w * sa) << ',' << fmt(Y(s1 * sa) - w * ca) << ' ';
        }
        for (int i = cfg.cells; i-- > 0;) {
            const double w = dens[r][i] * wscale;
            const double s0 = i * h, s1 = (i + 1) * h;
            pts << fmt(X(s1 * ca) + w * sa) << ',' << fmt(Y(s1 * sa) + w * ca) << ' '
                << fmt(X(s0 * ca) + w * sa) << ',' << fmt(Y(s0 * sa) + w * ca) << ' ';
        }
        out << "<polygon points=\"" << pts.str()
            << "\" fill=\"#2e7d32\" fill-opacity=\"0.75\" stroke=\"none\"/>\n";
    }

    // light arrow toward the origin
    const double ax0 = X(sun_x), ay0 = Y(sun_y);
    const double ax1 = X(0.45 * sun_x), ay1 = Y(0.45 * sun_y);
    out << "<circle cx=\"" << fmt(ax0) << "\" cy=\"" << fmt(ay0)
        << "\" r=\"10\" fill=\"#f9a825\"/>\n";
    out << "<line x1=\"" << fmt(ax0) << "\" y1=\"" << fmt(ay0) << "\" x2=\"" << fmt(ax1)
        << "\" y2=\"" << fmt(ay1)
        << "\" stroke=\"#f9a825\" stroke-width=\"2.5\"/>\n";
    out << "</svg>\n";
}

int run_optimize(branchlight::ray_family_config cfg, const std::string& csv,
                 const std::string& svg) {
    const auto res = branchlight::maximize_over_family(cfg);
    const double L =
        cfg.length > 0.0 ? cfg.length : branchlight::default_family_length(cfg.alpha, cfg.c);
    std::cout << "payoff=" << fmt(res.report.payoff) << "\n";
    std::cout << "sunlight=" << fmt(res.report.sunlight) << "\n";
    std::cout << "cost=" << fmt(res.report.cost) << "\n";
    std::cout << "passes=" << res.passes << "\n";
    std::cout << "converged=" << (res.converged ? 1 : 0) << "\n";
    std::cout << "winning_start=" << res.start_names[res.winning_start] << "\n";
    std::cout << "support_fraction=" << fmt(res.report.support_fraction) << "\n";
    for (std::size_t r = 0; r < cfg.angles.size(); ++r)
        std::cout << "ray[" << r << "] angle=" << fmt(cfg.angles[r])
                  << " mass=" << fmt(res.report.ray_masses[r]) << "\n";
    for (std::size_t k = 0; k < res.start_names.size(); ++k)
        std::cout << "start[" << k << "] name=" << res.start_names[k]
                  << " payoff=" << fmt(res.start_payoffs[k]) << "\n";
    if (!csv.empty()) write_fan_csv(csv, cfg, res.densities, L);
    if (!svg.empty()) write_fan_svg(svg, cfg, res.densities, L);
    return res.converged ? 0 : 2;
}

int run_check_theory(const std::string& out_path) {
    std::ostringstream table;
    table << "check,alpha,worst,argmin,pass\n";
    bool all_pass = true;
    auto emit = [&](const std::string& name, double alpha, double worst,
                    const std::string& arg, bool pass) {
        table << name << ',' << fmt(alpha) << ',' << fmt(worst) << ",\"" << arg << "\","
              << (pass ? 1 : 0) << "\n";
        all_pass = all_pass && pass;
    };

    // margin positivity: unrestricted for alpha >= 1/2, restricted to the
    // certified bend cone otherwise
    const int G = 64;
    for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
        const bool restricted = alpha < 0.5;
        const double cos_floor = branchlight::bypass_ratio_peak(alpha);
        double worst = 1e300, wl = 0, wa = 0, wb = 0;
        for (int i = 0; i <= G; ++i) {
            const double lam = static_cast<double>(i) / G;
            for (int j = 0; j <= G; ++j) {
                const double ta = 0.5 * kPi * j / G;
                for (int k = 0; k <= G; ++k) {
                    const double tb = 0.5 * kPi * k / G;
                    if (restricted && std::cos(tb) < cos_floor) continue;
                    const double F = branchlight::bypass_margin(lam, ta, tb, alpha);
                    if (F < worst) {
                        worst = F;
                        wl = lam;
                        wa = ta;
                        wb = tb;
                    }
                }
            }
        }
        std::ostringstream arg;
        arg << "lambda=" << fmt(wl) << ";theta_a=" << fmt(wa) << ";theta_b=" << fmt(wb);
        emit(restricted ? "margin_positive_restricted" : "margin_positive", alpha, worst,
             arg.str(), worst >= -1e-12);
    }

    // the ratio peaks at 1/2
    for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.45}) {
        const double peak = branchlight::bypass_ratio_peak(alpha);
        double worst = -1e300, wl = 0;
        for (int i = 0; i <= 2000; ++i) {
            const double lam = static_cast<double>(i) / 2000;
            const auto g = branchlight::bypass_ratio(lam, alpha);
            if (g.at_endpoint) continue;
            if (g.value - peak > worst) {
                worst = g.value - peak;
                wl = lam;
            }
        }
        emit("ratio_peak_at_half", alpha, worst, "lambda=" + fmt(wl), worst <= 1e-12);
    }

    // below the threshold a genuine negative margin exists (sharpness)
    {
        const double alpha = 0.2;
        double best = 1e300, wl = 0, wb = 0;
        const double cos_floor = branchlight::bypass_ratio_peak(alpha);
        for (int i = 1; i < 400; ++i) {
            const double lam = static_cast<double>(i) / 400;
            for (int k = 0; k <= 400; ++k) {
                const double tb = 0.5 * kPi * k / 400;
                if (std::cos(tb) >= cos_floor) continue; // outside certified cone
                const double F = branchlight::bypass_margin(lam, 0.0, tb, alpha);
                if (F < best) {
                    best = F;
                    wl = lam;
                    wb = tb;
                }
            }
        }
        emit("margin_sign_sharp", alpha, best,
             "lambda=" + fmt(wl) + ";theta_a=0;theta_b=" + fmt(wb), best < 0.0);
    }

    // remainder nonnegativity on random admissible collinear bends
    {
        std::mt19937_64 rng(20240817);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double worst = 1e300;
        double walpha = 0.0;
        for (int trial = 0; trial < 2000; ++trial) {
            const double alpha = 0.05 + 0.95 * uni(rng);
            const int n = 1 + static_cast<int>(uni(rng) * 5.0);
            std::vector<double> kappas(n);
            for (auto& k : kappas) k = 0.1 + uni(rng);
            branchlight::vec2 dir{std::cos(0.3), std::sin(0.3)};
            std::vector<branchlight::vec2> pts;
            double t = 0.0;
            for (int j = 0; j <= n; ++j) {
                t += 0.2 + uni(rng);
                pts.push_back(t * dir);
            }
            const double tstar = t + 0.2 + uni(rng);
            const branchlight::vec2 pstar = tstar * dir;
            const double S = branchlight::bypass_remainder(pstar, pts, kappas, alpha);
            if (S < worst) {
                worst = S;
                walpha = alpha;
            }
        }
        emit("remainder_nonnegative", walpha, worst, "random collinear sweep",
             worst >= -1e-12);
    }

    if (out_path.empty())
        std::cout << table.str();
    else
        open_out(out_path) << table.str();
    return all_pass ? 0 : 2;
}

int run_alpha_zero(bool uniform, const std::string& field_path, double c, double lambda,
                   double ell, int samples, int grid) {
    branchlight::light_field field;
    if (uniform)
        field = branchlight::uniform_field(samples);
    else if (!field_path.empty())
        field = branchlight::load_field(field_path);
    else
        throw std::invalid_argument("alpha-zero: provide --uniform or --field");
    const auto gain = branchlight::alpha_zero_K(field, grid);
    const auto rep = branchlight::alpha_zero_verdict(gain.K, c, lambda, ell);
    std::cout << "K=" << fmt(gain.K) << "\n";
    std::cout << "best_direction=" << fmt(gain.w_angle) << "\n";
    std::cout << "verdict=" << rep.verdict_name << "\n";
    std::cout << "witness=" << fmt(rep.witness_value) << "\n";
    std::cout << "upper_bound=" << fmt(rep.upper_bound) << "\n";
    return 0;
}

int run_phototropism(double alpha, double c, double theta0, double bend) {
    const auto rep = branchlight::phototropism_compare(alpha, c, theta0, bend);
    std::cout << "straight=" << fmt(rep.straight_payoff) << "\n";
    std::cout << "bent=" << fmt(rep.bent_payoff) << "\n";
    std::cout << "difference=" << fmt(rep.difference) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"branchlight: sunlight-vs-transport payoff toolkit (angles in radians)"};
    app.require_subcommand(1);

    // sunlight
    std::string m_path, f_path;
    double s_theta0 = kPi / 4;
    auto* sc_sun = app.add_subcommand("sunlight", "captured light of a measure");
    sc_sun->add_option("--measure", m_path, "measure JSON path")->required();
    auto* opt_theta = sc_sun->add_option("--theta0", s_theta0, "light angle (radians)");
    sc_sun->add_option("--field", f_path, "light-field JSON path (overrides --theta0)")
        ->excludes(opt_theta);

    // cost
    std::string t_path;
    double c_alpha = 1.0;
    auto* sc_cost = app.add_subcommand("cost", "irrigation cost of a tree");
    sc_cost->add_option("--tree", t_path, "tree JSON path")->required();
    sc_cost->add_option("--alpha", c_alpha, "cost exponent in [0,1]")->required();

    // closed-form
    double cf_alpha = 0.75, cf_c = 1.0, cf_theta0 = kPi / 4;
    std::string cf_csv0, cf_csv1;
    auto* sc_cf = app.add_subcommand("closed-form", "optimal two-ray profiles");
    sc_cf->add_option("--alpha", cf_alpha, "cost exponent in (0,1]")->required();
    sc_cf->add_option("--c", cf_c, "cost weight")->required();
    sc_cf->add_option("--theta0", cf_theta0, "light angle (radians)")->required();
    sc_cf->add_option("--csv0", cf_csv0, "CSV output for the ground-ray table");
    sc_cf->add_option("--csv1", cf_csv1, "CSV output for the upper-ray table");

    // optimize
    branchlight::ray_family_config cfg;
    cfg.angles.clear();
    std::vector<double> angles;
    std::vector<unsigned long long> seeds = cfg.seeds;
    bool no_seeds = false;
    std::string o_csv, o_svg;
    auto* sc_opt = app.add_subcommand("optimize", "maximize payoff over a ray fan");
    sc_opt->add_option("--alpha", cfg.alpha, "cost exponent in (0,1]");
    sc_opt->add_option("--c", cfg.c, "cost weight");
    sc_opt->add_option("--theta0", cfg.theta0, "light angle (radians)");
    sc_opt->add_option("--angles", angles, "ray angles (radians, comma separated)")
        ->delimiter(',');
    sc_opt->add_option("--cells", cfg.cells, "cells per ray");
    sc_opt->add_option("--length", cfg.length, "grid extent (default 2 c^{-1/alpha})");
    sc_opt->add_option("--seeds", seeds, "random start seeds (comma separated)")
        ->delimiter(',');
    sc_opt->add_flag("--no-seeds", no_seeds, "deterministic per-ray starts only");
    sc_opt->add_option("--max-passes", cfg.max_passes, "ascent pass budget");
    sc_opt->add_option("--pass-tol", cfg.pass_tol, "per-pass improvement tolerance");
    sc_opt->add_option("--csv", o_csv, "CSV output for the optimized densities");
    sc_opt->add_option("--svg", o_svg, "SVG rendering of the optimized fan");

    // check-theory
    std::string th_out;
    auto* sc_th = app.add_subcommand("check-theory", "positivity/threshold sweeps");
    sc_th->add_option("--out", th_out, "CSV output path (default stdout)");

    // alpha-zero
    bool az_uniform = false;
    std::string az_field;
    double az_c = 1.0, az_lambda = 1.0, az_ell = 1.0;
    int az_samples = 8192, az_grid = 1440;
    auto* sc_az = app.add_subcommand("alpha-zero", "degenerate-exponent trichotomy");
    sc_az->add_flag("--uniform", az_uniform, "uniform intensity on the circle");
    sc_az->add_option("--field", az_field, "light-field JSON path");
    sc_az->add_option("--c", az_c, "cost weight")->required();
    sc_az->add_option("--lambda", az_lambda, "witness optical depth");
    sc_az->add_option("--ell", az_ell, "witness slab width");
    sc_az->add_option("--samples", az_samples, "field quadrature samples for --uniform");
    sc_az->add_option("--grid", az_grid, "search grid for the best direction");

    // phototropism
    double ph_alpha = 1.0, ph_c = 0.5, ph_theta0 = kPi / 4, ph_bend = kPi / 6;
    auto* sc_ph = app.add_subcommand("phototropism", "straight stem vs bent stem");
    sc_ph->add_option("--alpha", ph_alpha, "cost exponent in (0,1]");
    sc_ph->add_option("--c", ph_c, "cost weight");
    sc_ph->add_option("--theta0", ph_theta0, "light angle (radians)");
    sc_ph->add_option("--bend", ph_bend, "bend toward the light (radians, in (0,pi/2))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sc_sun->parsed()) return run_sunlight(m_path, s_theta0, f_path);
        if (sc_cost->parsed()) return run_cost(t_path, c_alpha);
        if (sc_cf->parsed()) return run_closed_form(cf_alpha, cf_c, cf_theta0, cf_csv0, cf_csv1);
        if (sc_opt->parsed()) {
            if (!angles.empty()) {
                cfg.angles = angles;
            } else {
                for (int k = 0; k < 8; ++k) cfg.angles.push_back(k * kPi / 8);
            }
            cfg.seeds = no_seeds ? std::vector<unsigned long long>{} : seeds;
            return run_optimize(cfg, o_csv, o_svg);
        }
        if (sc_th->parsed()) return run_check_theory(th_out);
        if (sc_az->parsed())
            return run_alpha_zero(az_uniform, az_field, az_c, az_lambda, az_ell,
                                  az_samples, az_grid);
        if (sc_ph->parsed()) return run_phototropism(ph_alpha, ph_c, ph_theta0, ph_bend);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
