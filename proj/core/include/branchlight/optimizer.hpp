#pragma once

#include <string>
#include <vector>

#include "branchlight/geometry.hpp"

namespace branchlight {

// Fan of rays through the origin carrying piecewise-constant densities on a
// shared arclength grid; the search family for payoff maximization.
struct ray_family_config {
    std::vector<double> angles;          // radians, in [0, pi], pairwise distinct
    double length = 0.0;                 // grid extent; <= 0 selects 2 c^{-1/alpha}
    int cells = 256;                     // cells per ray
    double alpha = 0.75;
    double c = 1.0;
    double theta0 = 0.78539816339744831; // light angle, in (0, pi/2]
    std::vector<unsigned long long> seeds{1, 2, 3, 5, 8}; // random multi-starts
    int max_passes = 100000;
    double pass_tol = 1e-10;             // payoff improvement per full pass
};

// Throws std::invalid_argument on malformed configs.
void validate(const ray_family_config& cfg);

// Default grid extent: twice the predicted support scale c^{-1/alpha}.
double default_family_length(double alpha, double c);

struct payoff_report {
    double sunlight = 0.0;
    double cost = 0.0;
    double payoff = 0.0;
    std::vector<double> ray_masses;
    // structural diagnostics: the two rays predicted to carry the optimum
    int ground_ray = -1;           // index nearest angle 0
    int upper_ray = -1;            // index nearest theta0 + pi/2
    double support_fraction = 0.0; // mass share on those two rays
};

// Payoff of given densities: sunlight of the union measure (self-shading
// handled by the exact projection merge) minus the summed ray costs.
payoff_report evaluate_payoff(const ray_family_config& cfg,
                              const std::vector<std::vector<double>>& densities);

// The fan as a measure, for projection cross-checks and plotting.
measure family_measure(const ray_family_config& cfg,
                       const std::vector<std::vector<double>>& densities);

struct family_result {
    std::vector<std::vector<double>> densities;
    payoff_report report;
    int passes = 0;        // coordinate-ascent passes used by the winning start
    bool converged = true; // false when a pass budget was exhausted
    int winning_start = 0;
    std::vector<std::string> start_names; // "seed<s>" and "ray<r>" roster
    std::vector<double> start_payoffs;    // dispersion across starts
    double worst_ascent_drop = 0.0;       // most negative pass-to-pass change
};

// Projected coordinate ascent over the family: per-cell exact line searches
// with non-negativity, multi-started from one uniform random profile per seed
// plus one deterministic start per ray (that ray's closed-form profile), with
// ray-to-ray transfer moves to escape draining traps. Best run wins; earlier
// roster index breaks ties.
family_result maximize_over_family(const ray_family_config& cfg);

struct phototropism_report {
    double straight_payoff = 0.0;
    double bent_payoff = 0.0;
    double difference = 0.0; // straight minus bent, expected >= 0
};

// Payoff of the optimal straight stem versus the same density profile tilted
// toward the light by bend_angle: tilting shortens the projected window and
// self-shades, so bending toward the light loses payoff.
phototropism_report phototropism_compare(double alpha, double c, double theta0,
                                         double bend_angle);

} // namespace branchlight
