#pragma once

#include <span>
#include <string>
#include <vector>

#include "branchlight/geometry.hpp"
#include "branchlight/sunlight.hpp"

namespace branchlight {

// Leading-order margin (per unit length) gained by replacing a transport path
// bent by theta_b with a straight segment, when a fraction lambda of the flux
// continues past the bend. Non-negative margins certify straight branches.
double bypass_margin(double lambda, double theta_a, double theta_b, double alpha);

struct ratio_value {
    double value = 0.0;
    bool at_endpoint = false; // true when the endpoint limit 0 was substituted
};

// Auxiliary concentration ratio controlling the sign of the bypass margin;
// its maximum over lambda sits at 1/2.
ratio_value bypass_ratio(double lambda, double alpha);

// Peak value of the ratio: bypass_ratio(1/2) = 1 - 2^(2 alpha - 1).
double bypass_ratio_peak(double alpha);

struct condition_check {
    bool applicable = false;
    double lhs = 0.0; // cos(pi/2 - theta0)
    double rhs = 0.0; // 1 - 2^(2 alpha - 1)
};

// Whether the two-ray optimal-shape characterization is certified at
// (alpha, theta0): always for alpha >= 1/2, otherwise when lhs >= rhs.
condition_check optimal_shape_applicable(double alpha, double theta0);

// Geometry of a single bend: flux sigma continues straight at angle theta_a
// from the incoming direction, fluxes kappa_1..kappa_n peel off at angles
// theta_1 > ... > theta_n inside the admissible cone below pi/2 - theta0.
struct bypass_config {
    std::vector<double> kappa;
    double sigma = 0.0;
    double theta_a = 0.0;
    double theta_b = 0.0;
    std::vector<double> thetas; // strictly decreasing, inside [0, pi/2 - theta0)
    double theta0 = 0.0;
    double ell_a = 0.0;
    double ell_b = 0.0;
};

// Throws std::invalid_argument on ordering or sign violations.
void validate(const bypass_config& cfg);

// Cost difference between the bent route and its straight bypass for a single
// peel-off flux (kappa.size() == 1). Positively homogeneous of degree 1 in
// (ell_a, ell_b).
double bypass_difference(const bypass_config& cfg, double alpha);

// Remainder term bounding the multi-bend bypass: path_points holds the bend
// points followed by the terminal point (kappas.size() + 1 entries), p_star is
// the common reattachment point. Non-negative for admissible collinear
// configurations.
double bypass_remainder(vec2 p_star, std::span<const vec2> path_points,
                        std::span<const double> kappas, double alpha);

struct direction_gain {
    double K = 0.0;
    double w_angle = 0.0; // maximizing screen direction
};

// Best possible sunlight gathered per unit shadow length in the alpha = 0
// regime: maximizes sum_k weight_k |<w, n_k>| over unit directions w on a
// grid of at least 360 angles, then sharpens with one golden-section pass.
direction_gain alpha_zero_K(const light_field& field, int angular_grid);

enum class alpha_zero_kind { unbounded, zero };

struct alpha_zero_report {
    alpha_zero_kind verdict = alpha_zero_kind::zero;
    double witness_value = 0.0; // payoff guaranteed by the slab witness
    double upper_bound = 0.0;   // (K - c) * ell, non-positive in the zero regime
    std::string verdict_name;   // "UNBOUNDED" or "ZERO"
};

// Trichotomy at alpha = 0: if K > c the payoff supremum is infinite, with the
// explicit witness value [(1 - e^{-lambda}) K - c] * ell achieved by a shaded
// slab of optical depth lambda and width ell; if K <= c no measure beats zero.
alpha_zero_report alpha_zero_verdict(double K, double c, double lambda_density,
                                     double ell);

} // namespace branchlight
