#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "branchlight/geometry.hpp"

namespace branchlight {

// Finite tree rooted at the origin carrying sink masses at nodes; edge flux
// is the total sink mass strictly below the edge.
struct irrigation_tree {
    std::vector<vec2> nodes;                  // node 0 = origin
    std::vector<std::pair<int, int>> edges;   // (parent, child)
    std::map<int, double> sinks;              // node index -> delivered mass
};

// Throws std::runtime_error on structural defects (dangling edges, cycles,
// multiple parents, unreachable nodes).
void validate(const irrigation_tree& t);

double edge_flux(const irrigation_tree& t, std::size_t edge_index);

// Sum over edges of flux^alpha x length; zero-flux edges are pruned from the
// sum. alpha outside [0, 1] is a domain error.
double tree_cost(const irrigation_tree& t, double alpha);

// Staircase density on a ray through the origin: N equal cells on [0, ell].
struct ray_density_plan {
    double angle = 0.0;
    double ell = 0.0;
    std::vector<double> u;

    // tail masses at the N+1 cell edges (non-increasing, ending at 0)
    std::vector<double> tail_z() const;
};

void validate(const ray_density_plan& p);

// c x integral of z^alpha, exact per cell for the piecewise-linear tail.
double ray_cost(const ray_density_plan& p, double alpha, double c);

// Per-cell adaptive quadrature evaluation of the same integral; retained as
// an independent cross-check of the closed-form path.
double ray_cost_quadrature(const ray_density_plan& p, double alpha, double c);

struct bruteforce_result {
    irrigation_tree tree;
    double cost = 0.0;
    int steiner_points = 0;
    std::string topology; // canonical encoding of the winning topology
};

// Global minimum over all rooted branching topologies for up to 5 atoms,
// with iterated weighted-midpoint relaxation of the branch points.
bruteforce_result optimal_tree_bruteforce(std::span<const atom> atoms, double alpha);

struct monotone_report {
    bool pass = true;
    int worst_node = -1;       // child node where the largest violation occurs
    double worst_decrease = 0.0;
};

// Checks that the light-direction coordinate <x, n> never decreases along any
// root-to-leaf path (the structural property of cost-optimal branches).
monotone_report check_monotone_structure(const irrigation_tree& t, double theta0);

irrigation_tree tree_from_json(const std::string& text);
std::string tree_to_json(const irrigation_tree& t);
irrigation_tree load_tree(const std::string& path);

} // namespace branchlight
