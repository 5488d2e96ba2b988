#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace branchlight {

struct vec2 {
    double x = 0.0;
    double y = 0.0;

    vec2 operator+(vec2 o) const { return {x + o.x, y + o.y}; }
    vec2 operator-(vec2 o) const { return {x - o.x, y - o.y}; }
    vec2 operator*(double t) const { return {x * t, y * t}; }
    double dot(vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline vec2 operator*(double t, vec2 v) { return v * t; }

// Light direction n = (cos theta, sin theta); the screen line carries the
// coordinate y = <p, perp()> with perp() the 90-degree counterclockwise turn.
struct direction {
    double theta = 0.0;
    vec2 unit() const { return {std::cos(theta), std::sin(theta)}; }
    vec2 perp() const { return {-std::sin(theta), std::cos(theta)}; }
};

// Constant-density stretch [t0, t1] in arclength from endpoint a.
struct density_piece {
    double t0 = 0.0;
    double t1 = 0.0;
    double density = 0.0;
};

// Straight carrier with piecewise-constant linear density; pieces tile
// [0, length] contiguously.
struct segment {
    vec2 a, b;
    std::vector<density_piece> pieces;

    double length() const { return (b - a).norm(); }
    double mass() const;
};

struct atom {
    vec2 pos;
    double mass = 0.0;
};

// Finite union of density-carrying segments and point masses on the closed
// upper half-plane.
struct measure {
    std::vector<segment> segments;
    std::vector<atom> atoms;
};

// Throws std::invalid_argument when a structural invariant fails
// (half-plane support, piece tiling, negative density/mass).
void validate(const measure& m);

double total_mass(const measure& m);

struct projected_atom {
    double y = 0.0;
    double mass = 0.0;
};

// Density of the pushforward onto the screen line: piecewise constant on
// [breakpoints[i], breakpoints[i+1]) plus a purely atomic part.
struct projected_density {
    std::vector<double> breakpoints;       // size k+1 for k intervals (empty or >= 2)
    std::vector<double> values;            // size k
    std::vector<projected_atom> atoms;     // sorted by coordinate

    double interval_mass() const;
    double atom_mass() const;
    double total() const { return interval_mass() + atom_mass(); }
};

// Pushforward of m along direction n onto the screen line. Segments parallel
// to n (|<t, perp>| < 1e-12) collapse to projected atoms; overlapping
// contributions merge on a shared breakpoint grid snapped at
// 1e-12 x (projected support diameter).
projected_density project(const measure& m, const direction& n);

// Pointwise density of the absolutely continuous part at screen coordinate y
// (half-open interval convention; 0 outside).
double density_at(const projected_density& pd, double y);

measure measure_from_json(const std::string& text);
std::string measure_to_json(const measure& m);
measure load_measure(const std::string& path);

} // namespace branchlight
