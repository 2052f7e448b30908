#pragma once

#include <functional>

#include "tehomog/numerics.hpp"
#include "tehomog/periodic_media.hpp"

namespace tehomog {

class NonSimpleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kTauMin = 1e-3;  // tau = 0 is a spurious determinant zero

// 2x2 fundamental propagator of w'' + q w = 0 over length L.
struct Mat2 {
    double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
    Mat2 operator*(const Mat2& rhs) const;
    double det() const { return m00 * m11 - m01 * m10; }
};

Mat2 propagator_constant(double q, double length);

// Matching matrix at x = 1 for shared Cauchy data (A, B) at x = 0: rows are
// w(1)-v(1) and w'(1)-v'(1) as linear forms in (A, B). Transmission
// eigenvalues are the zeros of its determinant.
Mat2 matching_matrix_homog(double nbar, double tau);
double determinant_homog(double nbar, double tau);

// Transfer matrix of w'' + tau n(x/eps) w = 0 across [0,1]: exact
// cos/sin blocks for piecewise-constant profiles, fourth-order Magnus steps
// (steps_per_cell per period) otherwise.
Mat2 transfer_matrix_eps(const PeriodicIndex& idx, double eps, double tau, int steps_per_cell);
Mat2 matching_matrix_eps(const PeriodicIndex& idx, double eps, double tau, int steps_per_cell);
double determinant_eps(const PeriodicIndex& idx, double eps, double tau, int steps_per_cell);

struct EigRoot {
    double tau = 0.0;
    bool simple = false;
    double det_derivative = 0.0;
};

// Root of the determinant inside a sign-changing bracket, with a simplicity
// test on |dD/dtau| at the root.
EigRoot find_eigenvalue(const std::function<double(double)>& det, double lo, double hi,
                        double tol);

bool is_simple_root(const std::function<double(double)>& det, double tau);

// All determinant roots in a window, located by sign scan plus refinement.
std::vector<EigRoot> scan_eigenvalues(const std::function<double(double)>& det, double lo,
                                      double hi, double scan_step, double tol);

// Root nearest to `center`, searching windows of growing width.
EigRoot find_nearest_eigenvalue(const std::function<double(double)>& det, double center,
                                double window, double scan_step, double tol);

struct Eigenpair {
    Grid grid;
    double tau = 0.0;
    std::vector<double> w, v, phi;  // phi = w - v, L2-normalized
    std::vector<double> phipp;      // phi'' = -tau (n w - v), from the ODE pair
    double a0 = 0.0, b0 = 0.0;      // shared Cauchy data (w(0), w'(0)) after normalization
    bool simple = true;
    // endpoint traces of phi, from the ODE pair (exact up to the root tolerance)
    double phi2_0 = 0.0, phi2_1 = 0.0;  // phi''(0), phi''(1)
    double phi3_0 = 0.0, phi3_1 = 0.0;  // phi'''(0), phi'''(1)
};

Eigenpair extract_eigenpair_homog(double nbar, double tau, const Grid& g);
Eigenpair extract_eigenpair_eps(const PeriodicIndex& idx, double eps, double tau,
                                int steps_per_cell, const Grid& g);

}  // namespace tehomog
