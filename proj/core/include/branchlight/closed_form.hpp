#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "branchlight/geometry.hpp"
#include "branchlight/numerics.hpp"

namespace branchlight {

// Optimal single-ray profile for sunshine factor `sin_factor` (1 on the ray
// perpendicular to the light, sin(theta0) on the ground ray). Tables are
// indexed by the dual variable q in [0, 1]; u(0) is +infinity (the optimal
// density has an integrable log singularity at the root).
struct closed_form_solution {
    double alpha = 0.0;
    double c = 0.0;
    double sin_factor = 1.0;
    double ell = 0.0;                  // support length of the density
    std::vector<double> q, s, z, u;    // aligned tables over the q-grid

    double q_at(double arc) const;     // monotone-cubic inverse of s(q)
    double u_at(double arc) const;     // -sin_factor * ln q(arc)
    double z_at(double arc) const;     // remaining tail mass at arclength arc
    double mass() const;               // total mass z(0)
    double integrated_mass() const;    // quadrature of u over [0, ell]

private:
    friend closed_form_solution solve_ray(double, double, double, int);
    pchip inv_;                        // s -> q
};

// Tail-mass profile z as an explicit function of the dual variable:
// (sin_factor/c)^{1/alpha} * (1 + q ln q - q)^{1/alpha}.
double z_of_q(double q, double alpha, double c, double sin_factor);

// Arclength at dual variable q:
// sin_factor^{(1-alpha)/alpha}/(alpha c^{1/alpha}) * int_0^q (1 + t ln t - t)^{(1-alpha)/alpha} dt.
// s_of_q(1) is the support length. Exact q/c shortcut at alpha = 1.
double s_of_q(double q, double alpha, double c, double sin_factor);

// Builds the tables on a uniform q-grid with geometric refinement near q = 1
// and the monotone-cubic inverse q(s).
closed_form_solution solve_ray(double alpha, double c, double sin_factor, int grid_size = 1024);

// Net payoff of a nonnegative staircase density (N equal cells on [0, L]):
// int sin_factor (1 - e^{-u/sin_factor}) ds - c int z^alpha ds, both terms in
// closed form per cell (z is piecewise linear).
double payoff_J(std::span<const double> u_cells, double L, double alpha, double c,
                double sin_factor);

// Exact staircase cell averages of the optimal density via tail differences:
// (z(i h) - z((i+1) h)) / h on N cells covering [0, L].
std::vector<double> cell_average_density(const closed_form_solution& sol, double L, int N);

struct assembled_measure {
    measure m;
    bool certified = false;            // two-ray support claim applies to (alpha, theta0)
    double ell0 = 0.0;
    double ell1 = 0.0;
    double payoff_reference = 0.0;     // J0 + J1 at the closed-form profiles
};

// The conjectured optimal measure: the perpendicular-ray profile on
// angle theta0 + pi/2 and the ground-ray profile on the positive x-axis.
// Outside the certified parameter region the measure is still built and
// flagged non-certified.
assembled_measure assemble_optimal_measure(double alpha, double c, double theta0,
                                           int cells_per_ray = 65536);

// CSV rows `s,q,z,u` over the solution tables.
void solution_to_csv(const closed_form_solution& sol, std::ostream& out);

} // namespace branchlight
