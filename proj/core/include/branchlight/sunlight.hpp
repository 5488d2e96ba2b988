#pragma once

#include <span>
#include <string>
#include <vector>

#include "branchlight/geometry.hpp"

namespace branchlight {

struct light_sample {
    direction n;
    double weight = 0.0;
};

// Quadrature representation of an angular intensity profile on the circle.
struct light_field {
    std::vector<light_sample> samples;
};

void validate(const light_field& f);

// Captured light from one direction: integral of 1 - exp(-density) over the
// projected screen density, evaluated in closed form per interval. The atomic
// part of the projection captures nothing.
double sunlight_single(const measure& m, const direction& n);

// Weighted quadrature sum of sunlight_single over the field samples.
double sunlight_multi(const measure& m, const light_field& field);

// M equally spaced directions with equal weights summing to 2*pi
// (intensity 1 on the whole circle).
light_field uniform_field(int M);

// Same total intensity, but nodes form per-arc composite 8-point
// Gauss-Legendre panels with edges clustered toward the given angles.
// Aligning the arcs with the directions of the scene's segments removes the
// slope kinks of the per-direction response from every panel interior, which
// restores fast quadrature convergence.
light_field aligned_uniform_field(int M, std::span<const double> align_angles);

light_field field_from_json(const std::string& text);
std::string field_to_json(const light_field& f);
light_field load_field(const std::string& path);

} // namespace branchlight
