#pragma once

#include <vector>

#include "tehomog/numerics.hpp"

namespace tehomog {

enum class ProfileKind { Piecewise, Trigonometric, Sampled };

// Refractive index n(y) on the unit torus Y = [0,1], with n(y) - 1 >= c > 0.
// Three representations: piecewise constant (breakpoints y_i with values n_i
// on [y_i, y_{i+1})), trigonometric (mean plus finite cosine/sine series),
// and uniform grid samples with the seam value duplicated.
class PeriodicIndex {
public:
    static PeriodicIndex piecewise(std::vector<double> breakpoints, std::vector<double> values);
    static PeriodicIndex trigonometric(double mean, std::vector<double> cos_coef,
                                       std::vector<double> sin_coef);
    static PeriodicIndex sampled(std::vector<double> samples);

    ProfileKind kind() const { return kind_; }

    double value(double y) const;                    // n(y mod 1), floor convention
    double value_scaled(double x, double eps) const; // n(x/eps)
    // mean of the one-sided limits; differs from value(y) only at the jump
    // points of a piecewise profile
    double value_sided_mean(double y) const;
    double coefficient_a(double y) const;            // a(y) = 1/(n(y)-1)
    double cell_average() const { return n_bar_; }
    double c_min() const { return c_min_; }

    // (cell average of a^{-1})^{-1}; equals 1/(n_bar - 1) and is computed both
    // ways and cross-checked.
    double homogenized_coefficient() const;

    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& values() const { return vals_; }
    double trig_mean() const { return mean_; }
    const std::vector<double>& cos_coefficients() const { return cosc_; }
    const std::vector<double>& sin_coefficients() const { return sinc_; }
    const std::vector<double>& samples() const { return samples_; }

private:
    PeriodicIndex() = default;
    void finalize();  // computes n_bar_, c_min_, validates positivity

    ProfileKind kind_ = ProfileKind::Piecewise;
    std::vector<double> breaks_, vals_;          // piecewise
    double mean_ = 0.0;
    std::vector<double> cosc_, sinc_;            // trigonometric
    std::vector<double> samples_;                // sampled, seam duplicated
    double n_bar_ = 0.0;
    double c_min_ = 0.0;
};

}  // namespace tehomog
