#include <doctest.h>

#include <branchlight/theory.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace branchlight;

namespace {

const double kPi = std::acos(-1.0);

// frozen independent evaluations of the margin and ratio functions
const double kMarginNegativeSample = -0.2311373831281177; // (0.2, 0.4975, 0.7893, pi/2)
const double kRatioSample = 0.2839088187032735;           // g(0.3) at alpha = 0.25
const double kRatioPeakQuarter = 0.2928932188134524;      // 1 - 2^{-1/2}
const double kSlabWitness = 2.973048212003658;            // ((1-e^{-5})4 - 1) * 1

} // namespace

TEST_CASE("bypass margin collapses to its endpoint forms") {
    for (double ta : {0.0, 0.4, 1.2}) {
        CHECK(bypass_margin(1.0, ta, 0.7, 0.6) ==
              doctest::Approx(1.0 - std::cos(ta)).epsilon(1e-14));
        CHECK(bypass_margin(1.0, ta, 0.7, 0.6) >= -1e-15);
    }
    CHECK(bypass_margin(0.0, 0.0, 0.8, 0.45) ==
          doctest::Approx(1.0 + std::cos(0.8)).epsilon(1e-14));
}

TEST_CASE("bypass margin matches direct evaluation and goes negative only off-cone") {
    // inside the certified cone the margin stays positive
    const double v = bypass_margin(0.5, kPi / 2, kPi / 2, 0.3);
    CHECK(v == doctest::Approx(1.0 - std::pow(2.0, -0.3)).epsilon(1e-13));
    CHECK(v > 0.0);

    // frozen certified-negative sample at alpha = 0.2
    CHECK(bypass_margin(0.4975, 0.7893, kPi / 2, 0.2) ==
          doctest::Approx(kMarginNegativeSample).epsilon(1e-12));
    CHECK(bypass_margin(0.4975, 0.7893, kPi / 2, 0.2) < 0.0);
}

TEST_CASE("concentration ratio has frozen values and endpoint limits") {
    ratio_value g = bypass_ratio(0.3, 0.25);
    CHECK(!g.at_endpoint);
    CHECK(g.value == doctest::Approx(kRatioSample).epsilon(1e-12));

    CHECK(bypass_ratio(0.0, 0.4).at_endpoint);
    CHECK(bypass_ratio(0.0, 0.4).value == doctest::Approx(0.0));
    CHECK(bypass_ratio(1.0, 0.4).at_endpoint);

    for (double lam : {0.1, 0.33, 0.5, 0.77})
        CHECK(bypass_ratio(lam, 0.5).value == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("concentration ratio peaks at the midpoint") {
    CHECK(bypass_ratio_peak(0.25) == doctest::Approx(kRatioPeakQuarter).epsilon(1e-14));
    CHECK(bypass_ratio_peak(0.5) == doctest::Approx(0.0));

    for (double alpha : {0.1, 0.25, 0.4}) {
        const double peak = bypass_ratio_peak(alpha);
        double best = -1e300;
        for (int i = 1; i < 100000; ++i) {
            double lam = i / 100000.0;
            best = std::max(best, bypass_ratio(lam, alpha).value);
        }
        CHECK(best <= peak + 1e-12);
        CHECK(best == doctest::Approx(peak).epsilon(1e-8));
    }
}

TEST_CASE("two-ray applicability follows the light-angle condition") {
    CHECK(optimal_shape_applicable(0.75, 0.1).applicable);
    CHECK(optimal_shape_applicable(0.5, 0.01).applicable);
    CHECK(optimal_shape_applicable(1.0, kPi / 2).applicable);

    condition_check steep = optimal_shape_applicable(0.25, kPi / 2);
    CHECK(steep.applicable);
    CHECK(steep.lhs == doctest::Approx(1.0));
    CHECK(steep.rhs == doctest::Approx(kRatioPeakQuarter).epsilon(1e-12));

    condition_check shallow = optimal_shape_applicable(0.25, 0.05);
    CHECK(!shallow.applicable);
    CHECK(shallow.lhs == doctest::Approx(std::sin(0.05)).epsilon(1e-12));
}

TEST_CASE("single-bend cost difference is homogeneous and has the stated slope") {
    bypass_config cfg;
    cfg.kappa = {0.4};
    cfg.sigma = 0.6;
    cfg.theta_a = 0.35;
    cfg.theta_b = 0.5;
    cfg.thetas = {0.2};
    cfg.theta0 = 0.9;
    cfg.ell_a = 0.7;
    cfg.ell_b = 1.1;
    validate(cfg);
    const double alpha = 0.6;

    bypass_config zero = cfg;
    zero.ell_a = 0.0;
    CHECK(bypass_difference(zero, alpha) == doctest::Approx(0.0).epsilon(1e-14));

    const double base = bypass_difference(cfg, alpha);
    for (double t : {0.5, 2.0, 7.5}) {
        bypass_config scaled = cfg;
        scaled.ell_a *= t;
        scaled.ell_b *= t;
        CHECK(bypass_difference(scaled, alpha) ==
              doctest::Approx(t * base).epsilon(1e-12));
    }

    // small-leg slope approaches the margin bracket
    const double kap = cfg.kappa[0], sig = cfg.sigma;
    const double bracket = std::pow(kap + sig, alpha) -
                           std::pow(sig, alpha) * std::cos(cfg.theta_a) +
                           std::pow(kap, alpha) * std::cos(cfg.theta_a + cfg.theta_b);
    const double ell = 1.0;
    double prev_err = 1e300;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        bypass_config small = cfg;
        small.ell_a = eps * ell;
        small.ell_b = ell;
        const double slope = bypass_difference(small, alpha) / (eps * ell);
        const double err = std::abs(slope - bracket);
        CHECK(err < prev_err + 1e-12);
        prev_err = err;
    }
    CHECK(prev_err < 1e-3);
}

TEST_CASE("bend-config validation enforces ordering and signs") {
    bypass_config cfg;
    cfg.kappa = {0.4, 0.3};
    cfg.sigma = 0.5;
    cfg.theta_a = 0.3;
    cfg.theta_b = 0.4;
    cfg.thetas = {0.2, 0.5}; // must be strictly decreasing
    cfg.theta0 = 0.8;
    cfg.ell_a = 1.0;
    cfg.ell_b = 1.0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg.thetas = {0.5, 0.2};
    CHECK_NOTHROW(validate(cfg));

    cfg.kappa[0] = -0.1;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("multi-bend remainder vanishes for one bend and stays nonnegative") {
    std::vector<vec2> pts{{1.0, 0.0}, {1.5, 0.0}};
    std::vector<double> kap{0.7};
    CHECK(bypass_remainder({2.0, 0.0}, pts, kap, 0.6) == doctest::Approx(0.0));

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(U(rng) * 4);
        const double alpha = 0.1 + 0.9 * U(rng);
        const double ang = 0.3;
        const vec2 dir{std::cos(ang), std::sin(ang)};
        double offset = 0.2 + U(rng);
        std::vector<vec2> path;
        std::vector<double> kappas;
        for (int j = 0; j < n; ++j) {
            path.push_back(offset * dir);
            offset += 0.1 + U(rng);
            if (j + 1 < n) kappas.push_back(0.1 + U(rng));
        }
        const vec2 p_star = (offset + 0.5) * dir;
        CHECK(bypass_remainder(p_star, path, kappas, alpha) >= -1e-12);
    }
}

TEST_CASE("remainder is continuous as a trailing flux vanishes") {
    // two bends collapse toward the exact one-bend cancellation at rate
    // kappa^alpha as the trailing flux vanishes
    const vec2 dir{1.0, 0.0};
    std::vector<vec2> path{0.5 * dir, 0.9 * dir, 1.3 * dir};
    const vec2 p_star = 2.0 * dir;
    for (double k2 : {1e-2, 1e-4, 1e-6}) {
        std::vector<double> kappas{0.7, k2};
        CHECK(std::abs(bypass_remainder(p_star, path, kappas, 0.7)) <
              5.0 * std::pow(k2, 0.7) + 1e-12);
    }
}

TEST_CASE("directional gain recovers the closed-form circle constant") {
    direction_gain g = alpha_zero_K(uniform_field(8192), 1440);
    CHECK(std::abs(g.K - 4.0) <= 1e-6);

    light_field one;
    one.samples.push_back({direction{0.8}, 1.0});
    direction_gain g1 = alpha_zero_K(one, 720);
    CHECK(g1.K == doctest::Approx(1.0).epsilon(1e-10));
    const double miss = std::abs(std::cos(g1.w_angle - 0.8));
    CHECK(miss == doctest::Approx(1.0).epsilon(1e-10));

    light_field two;
    two.samples.push_back({direction{0.0}, 1.0});
    two.samples.push_back({direction{kPi / 2}, 1.0});
    CHECK(alpha_zero_K(two, 720).K == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

    CHECK_THROWS_AS(alpha_zero_K(uniform_field(64), 100), std::invalid_argument);
}

TEST_CASE("flat-regime verdict follows the gain-cost comparison") {
    alpha_zero_report up = alpha_zero_verdict(4.0, 1.0, 5.0, 10.0);
    CHECK(up.verdict == alpha_zero_kind::unbounded);
    CHECK(up.verdict_name == "UNBOUNDED");
    CHECK(up.witness_value == doctest::Approx(10.0 * kSlabWitness).epsilon(1e-12));
    CHECK(up.upper_bound == doctest::Approx(30.0).epsilon(1e-12));

    alpha_zero_report tie = alpha_zero_verdict(2.0, 2.0, 1.0, 1.0);
    CHECK(tie.verdict == alpha_zero_kind::zero);
    CHECK(tie.verdict_name == "ZERO");
    CHECK(tie.upper_bound <= 0.0);

    // a vanishing slab keeps the verdict but forfeits the witness
    alpha_zero_report thin = alpha_zero_verdict(4.0, 1.0, 1e-9, 1.0);
    CHECK(thin.verdict == alpha_zero_kind::unbounded);
    CHECK(thin.witness_value < 0.0);
    CHECK(thin.witness_value == doctest::Approx(-1.0 + 4e-9).epsilon(1e-6));
}
