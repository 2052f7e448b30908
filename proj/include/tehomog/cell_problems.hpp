#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "tehomog/numerics.hpp"
#include "tehomog/periodic_media.hpp"

namespace tehomog {

class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Piecewise polynomial on the unit torus: piece i lives on [b_i, b_{i+1})
// with coefficients in the local variable t = y - b_i.
class PiecewisePoly {
public:
    PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> coef);

    double eval(double y) const;
    PiecewisePoly derivative() const;
    PiecewisePoly antiderivative(double value_at_zero) const;  // continuous across pieces
    double mean() const;
    void shift(double c);   // add a constant
    void scale(double s);

private:
    std::vector<double> breaks_;
    std::vector<std::vector<double>> coef_;
};

// Finite complex Fourier series sum_{k=1..K} 2 Re(c_k e^{2 pi i k y}) (mean zero).
class FourierSeries {
public:
    explicit FourierSeries(std::vector<std::complex<double>> modes);
    static FourierSeries from_profile_oscillation(const PeriodicIndex& idx);

    double eval(double y) const;
    FourierSeries derivative() const;
    FourierSeries solve_minus_laplace() const;  // u with -u'' = this, mean zero
    FourierSeries scaled(double s) const;

private:
    std::vector<std::complex<double>> modes_;  // modes_[k-1] multiplies e^{2 pi i k y}
};

// Mean-zero periodic solution of -u'' = rhs on the torus grid (seam value
// duplicated); generic cumulative-quadrature path. Also returns u' samples.
struct PeriodicSolution {
    std::vector<double> value;
    std::vector<double> derivative;
};
PeriodicSolution solve_periodic_poisson_full(std::span<const double> rhs, const Grid& g);
std::vector<double> solve_periodic_poisson(std::span<const double> rhs, const Grid& g);

// Individual cell problems on grid samples (generic path).
std::vector<double> solve_beta(const PeriodicIndex& idx, const Grid& g);
std::vector<double> solve_chi(const PeriodicIndex& idx, const Grid& g);
std::vector<double> solve_gamma(std::span<const double> chi, const Grid& g);
std::vector<double> solve_alpha(std::span<const double> chi, const Grid& g);
std::vector<double> solve_B(std::span<const double> gamma, const Grid& g);

enum class CellField { Beta, Chi, Gamma, Alpha, Bmat };

// The full cell hierarchy with stored derivatives and exact point evaluation
// (closed-form for piecewise and trigonometric profiles, interpolation for
// sampled ones).
class CellFunctions {
public:
    CellFunctions(const PeriodicIndex& idx, const Grid& g);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& value(CellField f) const;
    const std::vector<double>& derivative(CellField f) const;
    double eval(CellField f, double y) const;
    double eval_derivative(CellField f, double y) const;
    double n_bar() const { return n_bar_; }

private:
    struct Field {
        std::vector<double> value, deriv;
        std::shared_ptr<PiecewisePoly> poly, poly_deriv;
        std::shared_ptr<FourierSeries> fourier, fourier_deriv;
    };
    const Field& field(CellField f) const;

    Grid grid_;
    double n_bar_;
    ProfileKind kind_;
    Field beta_, chi_, gamma_, alpha_, bmat_;
};

}  // namespace tehomog
