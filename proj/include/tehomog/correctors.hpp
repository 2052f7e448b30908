#pragma once

#include "tehomog/bvp4.hpp"
#include "tehomog/cell_problems.hpp"
#include "tehomog/spectrum.hpp"

namespace tehomog {

// eps = 1/(N + delta): integer part and cutoff of 1/eps. The cutoff selects
// where the domain boundary x = 1 lands inside the unit cell.
struct CutoffDelta {
    double eps = 0.0;
    long n = 0;
    double delta = 0.0;
};

CutoffDelta cutoff(double eps);

// Slow (macroscopic) field driving the expansion: u0 together with
// s0 = (D^2 + tau) u0 and s1 = s0', plus endpoint traces of s0, s1, s0''.
struct SlowField {
    double tau = 0.0;
    std::vector<double> u0, s0, s1;
    double s0_at0 = 0.0, s0_at1 = 0.0;
    double s1_at0 = 0.0, s1_at1 = 0.0;
    double s0pp_at0 = 0.0, s0pp_at1 = 0.0;
};

// From a clamped homogenized solve: s0 = v/a with the companion field, s0''
// from the v-equation itself.
SlowField slow_field_from_homog(const BvpSolution& sol, double a_const,
                                std::span<const double> h);

// From a homogenized eigenpair with u0 = phi/tau: s0 = (1-nbar) w in closed form.
SlowField slow_field_from_eigenpair(const Eigenpair& pair, double nbar);

struct ExpansionTerms {
    double eps = 0.0, tau = 0.0;
    std::vector<double> u0, v0, u2, u3;
    // traces of u2, u3 and their x-derivatives at x = 0 and x = 1 (cell
    // argument at x = 1 reduced mod 1 to the cutoff delta)
    double u2_0 = 0.0, u2_1 = 0.0, du2_0 = 0.0, du2_1 = 0.0;
    double u3_0 = 0.0, u3_1 = 0.0, du3_0 = 0.0, du3_1 = 0.0;
};

ExpansionTerms build_expansion(const SlowField& slow, const CellFunctions& cells, double eps,
                               double a_homog, const Grid& g);

// Boundary corrector theta_eps^(n), n in {2,3}: oscillatory Cauchy solve with
// zero volume data and traces -eps * u^(n), -eps * d/dx u^(n).
BvpSolution solve_theta_eps(int order, const PeriodicIndex& idx, double eps, double tau,
                            const ExpansionTerms& terms, const Grid& g);

// One-dimensional limit corrector theta^*: constant-coefficient solve with
// zero value data and the beta'-weighted Neumann data at cutoff delta.
BvpSolution solve_theta_star(double nbar, double tau0, double phi2_0, double phi2_1,
                             double beta_prime_0, double beta_prime_delta, const Grid& g);

}  // namespace tehomog
