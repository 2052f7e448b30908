#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace tehomog {

// Uniform grid on [0,1] with abscissae x_j = j/(m-1); x(m-1) == 1.0 exactly.
class Grid {
public:
    explicit Grid(int points);

    int m() const { return m_; }
    double h() const { return h_; }
    double x(int j) const { return static_cast<double>(j) / (m_ - 1); }

    std::vector<double> sample(const std::function<double(double)>& f) const;

private:
    int m_;
    double h_;
};

// Composite Simpson; falls back to a trapezoid panel at the right end when
// the interval count is odd. Exact for cubics on full Simpson panels.
double integrate(std::span<const double> f, const Grid& g);

// L2 inner product of two grid functions.
double inner_product(std::span<const double> f, std::span<const double> w, const Grid& g);

// Discrete second derivative: 3-point stencil inside, 4-point one-sided at
// the endpoints (second order throughout).
std::vector<double> second_difference(std::span<const double> u, const Grid& g);

// Discrete first derivative: centered inside, 4-point one-sided at the ends.
std::vector<double> first_difference(std::span<const double> u, const Grid& g);

struct Norms {
    double l2 = 0.0;
    double h2 = 0.0;  // L2 norm of the discrete second derivative
};

Norms discrete_norms(std::span<const double> u, const Grid& g);

// Cubic Lagrange interpolation of 1-periodic samples on a uniform grid with
// the seam value duplicated (samples[0] == samples[m-1]).
double torus_interpolate(std::span<const double> samples, double y);

// Square band matrix, diagonal-major storage, bandwidths kl (below) and ku
// (above). Writes outside the band throw.
class BandMatrix {
public:
    BandMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    double& at(int i, int j);
    double get(int i, int j) const;  // zero outside the band

    std::vector<double> multiply(std::span<const double> x) const;
    double inf_norm() const;

private:
    int n_, kl_, ku_;
    std::vector<double> d_;
};

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(int pivot, double magnitude);
    SingularMatrixError(int pivot, double magnitude, const std::string& message);
    int pivot_index;
    double pivot_magnitude;
};

// Banded Gaussian elimination with partial pivoting. A pivot below
// 1e-14 * ||A||_inf raises SingularMatrixError with the pivot index.
std::vector<double> solve_banded(const BandMatrix& a, std::span<const double> rhs);

class BracketError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bracketing root finder: bisection with secant acceleration, bracket always
// retained. Requires f(lo) * f(hi) < 0. At most 200 iterations.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol);

struct RateSample {
    double eps;
    double err;
};

// Least-squares fit of log(err) against log(eps).
struct RateStudy {
    std::vector<RateSample> samples;
    double slope = 0.0;
    double r2 = 0.0;
    bool degenerate = false;  // set when some err == 0; slope is then +inf
};

RateStudy fit_rate(std::vector<RateSample> samples);

}  // namespace tehomog
