#include "tehomog/periodic_media.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tehomog {

namespace {

double wrap_unit(double y) { return y - std::floor(y); }

}  // namespace

PeriodicIndex PeriodicIndex::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    if (breakpoints.empty() || breakpoints.size() != values.size())
        throw std::invalid_argument("PeriodicIndex: breakpoints/values size mismatch");
    if (breakpoints.front() != 0.0)
        throw std::invalid_argument("PeriodicIndex: first breakpoint must be 0");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1] && breakpoints[i] < 1.0))
            throw std::invalid_argument("PeriodicIndex: breakpoints must increase within [0,1)");
    PeriodicIndex p;
    p.kind_ = ProfileKind::Piecewise;
    p.breaks_ = std::move(breakpoints);
    p.vals_ = std::move(values);
    p.finalize();
    return p;
}

PeriodicIndex PeriodicIndex::trigonometric(double mean, std::vector<double> cos_coef,
                                           std::vector<double> sin_coef) {
    PeriodicIndex p;
    p.kind_ = ProfileKind::Trigonometric;
    p.mean_ = mean;
    p.cosc_ = std::move(cos_coef);
    p.sinc_ = std::move(sin_coef);
    p.sinc_.resize(std::max(p.cosc_.size(), p.sinc_.size()), 0.0);
    p.cosc_.resize(p.sinc_.size(), 0.0);
    p.finalize();
    return p;
}

PeriodicIndex PeriodicIndex::sampled(std::vector<double> samples) {
    if (samples.size() < 9)
        throw std::invalid_argument("PeriodicIndex: need at least 9 samples");
    const double scale = std::max({1.0, std::abs(samples.front()), std::abs(samples.back())});
    if (std::abs(samples.front() - samples.back()) > 1e-8 * scale)
        throw std::invalid_argument("PeriodicIndex: sampled profile must repeat its seam value");
    const double seam = 0.5 * (samples.front() + samples.back());
    samples.front() = samples.back() = seam;
    PeriodicIndex p;
    p.kind_ = ProfileKind::Sampled;
    p.samples_ = std::move(samples);
    p.finalize();
    return p;
}

void PeriodicIndex::finalize() {
    switch (kind_) {
        case ProfileKind::Piecewise: {
            double avg = 0.0;
            double lo = vals_[0];
            for (std::size_t i = 0; i < vals_.size(); ++i) {
                const double next = (i + 1 < breaks_.size()) ? breaks_[i + 1] : 1.0;
                avg += vals_[i] * (next - breaks_[i]);
                lo = std::min(lo, vals_[i]);
            }
            n_bar_ = avg;
            c_min_ = lo - 1.0;
            break;
        }
        case ProfileKind::Trigonometric: {
            n_bar_ = mean_;
            double lo = value(0.0);
            const int scan = 1 << 14;
            for (int j = 1; j < scan; ++j) lo = std::min(lo, value(static_cast<double>(j) / scan));
            c_min_ = lo - 1.0;
            break;
        }
        case ProfileKind::Sampled: {
            Grid g(static_cast<int>(samples_.size()));
            n_bar_ = integrate(samples_, g);
            c_min_ = *std::min_element(samples_.begin(), samples_.end()) - 1.0;
            break;
        }
    }
    if (!(c_min_ > 0.0))
        throw std::invalid_argument("PeriodicIndex: profile must satisfy n(y) > 1");
}

double PeriodicIndex::value(double y) const {
    const double t = wrap_unit(y);
    switch (kind_) {
        case ProfileKind::Piecewise: {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
            return vals_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
        }
        case ProfileKind::Trigonometric: {
            double s = mean_;
            for (std::size_t k = 0; k < cosc_.size(); ++k) {
                const double arg = 2.0 * std::numbers::pi * static_cast<double>(k + 1) * t;
                s += cosc_[k] * std::cos(arg) + sinc_[k] * std::sin(arg);
            }
            return s;
        }
        case ProfileKind::Sampled:
            return torus_interpolate(samples_, t);
    }
    return 0.0;  // unreachable
}

double PeriodicIndex::value_scaled(double x, double eps) const { return value(x / eps); }

double PeriodicIndex::value_sided_mean(double y) const {
    if (kind_ != ProfileKind::Piecewise) return value(y);
    return 0.5 * (value(y - 1e-12) + value(y + 1e-12));
}

double PeriodicIndex::coefficient_a(double y) const { return 1.0 / (value(y) - 1.0); }

double PeriodicIndex::homogenized_coefficient() const {
    const double direct = 1.0 / (n_bar_ - 1.0);
    double mean_inv_a;  // cell average of a^{-1} = n - 1
    if (kind_ == ProfileKind::Piecewise) {
        mean_inv_a = n_bar_ - 1.0;
    } else if (kind_ == ProfileKind::Trigonometric) {
        Grid g(4097);
        mean_inv_a = integrate(g.sample([&](double y) { return value(y) - 1.0; }), g);
    } else {
        std::vector<double> shifted(samples_.size());
        for (std::size_t j = 0; j < samples_.size(); ++j) shifted[j] = samples_[j] - 1.0;
        Grid g(static_cast<int>(samples_.size()));
        mean_inv_a = integrate(shifted, g);
    }
    const double via_average = 1.0 / mean_inv_a;
    if (std::abs(via_average - direct) > 1e-10 * std::abs(direct))
        throw std::logic_error("PeriodicIndex: homogenized coefficient identity violated");
    return via_average;
}

}  // namespace tehomog
