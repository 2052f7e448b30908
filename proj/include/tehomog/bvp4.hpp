#pragma once

#include <optional>
#include <span>

#include "tehomog/numerics.hpp"
#include "tehomog/periodic_media.hpp"

namespace tehomog {

class ResolutionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Coefficient a(x) of the fourth-order operator: either the constant
// homogenized value or the oscillatory a(x/eps) = 1/(n(x/eps) - 1).
class CoefficientField {
public:
    static CoefficientField constant(double a);
    static CoefficientField oscillatory(PeriodicIndex idx, double eps);

    bool is_constant() const { return !idx_.has_value(); }
    double eps() const { return eps_; }
    double constant_value() const { return a_const_; }
    const PeriodicIndex& index() const { return *idx_; }

    // a at x via the harmonic mean of the midpoint samples x +- h/2; second
    // order for smooth coefficients and jump-safe at aligned discontinuities.
    double at_midpoints(double x, double h) const;
    double at_point(double x) const;

    // Oscillatory solves need >= 16 grid intervals per period.
    void require_resolved(const Grid& g) const;

private:
    std::optional<PeriodicIndex> idx_;
    double eps_ = 0.0;
    double a_const_ = 0.0;
};

struct CauchyData {
    double u0 = 0.0, du0 = 0.0, u1 = 0.0, du1 = 0.0;
};

// Discrete solution of (D^2 + tau) a (D^2 + tau) u + tau^2 u = h with the
// companion field v = a (D^2 + tau) u, obtained from the coupled
// second-order system on the shared grid.
struct BvpSolution {
    Grid grid;
    std::vector<double> u;
    std::vector<double> v;
    double tau = 0.0;
};

BvpSolution solve_clamped(const CoefficientField& a, double tau, std::span<const double> h,
                          const Grid& g);
BvpSolution solve_cauchy(const CoefficientField& a, double tau, std::span<const double> h,
                         const CauchyData& bc, const Grid& g);

// Forward application of the fourth-order operator; entries are meaningful
// for 2 <= j <= m-3 only (set to zero at the four outermost points).
std::vector<double> apply_operator(const CoefficientField& a, double tau,
                                   std::span<const double> u, const Grid& g);

}  // namespace tehomog
