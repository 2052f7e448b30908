#include "tehomog/cell_problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tehomog {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_unit(double y) { return y - std::floor(y); }

double poly_eval(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (std::size_t p = c.size(); p-- > 0;) v = v * t + c[p];
    return v;
}

// Cumulative integral of grid samples, fourth order: each interval uses the
// cubic through its four nearest points.
std::vector<double> cumulative_integral(std::span<const double> f, const Grid& g) {
    const int m = g.m();
    const double h = g.h();
    std::vector<double> F(m);
    F[0] = 0.0;
    for (int j = 0; j + 1 < m; ++j) {
        double inc;
        if (j == 0)
            inc = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        else if (j + 2 >= m)
            inc = h / 24.0 * (9.0 * f[m - 1] + 19.0 * f[m - 2] - 5.0 * f[m - 3] + f[m - 4]);
        else
            inc = h / 24.0 * (-f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]);
        F[j + 1] = F[j] + inc;
    }
    return F;
}

std::vector<double> torus_first_difference(std::span<const double> u, const Grid& g) {
    const int m = g.m();
    const double h = g.h();
    std::vector<double> d(m);
    for (int j = 0; j < m; ++j) {
        const int jm = (j == 0) ? m - 2 : j - 1;       // seam duplicated: u[0] == u[m-1]
        const int jp = (j == m - 1) ? 1 : j + 1;
        d[j] = (u[jp] - u[jm]) / (2.0 * h);
    }
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// PiecewisePoly

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> coef)
    : breaks_(std::move(breaks)), coef_(std::move(coef)) {
    if (breaks_.empty() || breaks_.size() != coef_.size() || breaks_.front() != 0.0)
        throw std::invalid_argument("PiecewisePoly: malformed pieces");
}

double PiecewisePoly::eval(double y) const {
    const double t = wrap_unit(y);
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return poly_eval(coef_[i], t - breaks_[i]);
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<std::vector<double>> dc(coef_.size());
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        const auto& c = coef_[i];
        std::vector<double> d;
        for (std::size_t p = 1; p < c.size(); ++p) d.push_back(c[p] * static_cast<double>(p));
        if (d.empty()) d.push_back(0.0);
        dc[i] = std::move(d);
    }
    return PiecewisePoly(breaks_, std::move(dc));
}

PiecewisePoly PiecewisePoly::antiderivative(double value_at_zero) const {
    std::vector<std::vector<double>> ac(coef_.size());
    double running = value_at_zero;
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        const auto& c = coef_[i];
        std::vector<double> A(c.size() + 1, 0.0);
        A[0] = running;
        for (std::size_t p = 0; p < c.size(); ++p) A[p + 1] = c[p] / static_cast<double>(p + 1);
        ac[i] = A;
        const double next = (i + 1 < breaks_.size()) ? breaks_[i + 1] : 1.0;
        running = poly_eval(A, next - breaks_[i]);
    }
    return PiecewisePoly(breaks_, std::move(ac));
}

double PiecewisePoly::mean() const {
    double total = 0.0;
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        const double next = (i + 1 < breaks_.size()) ? breaks_[i + 1] : 1.0;
        const double len = next - breaks_[i];
        const auto& c = coef_[i];
        for (std::size_t p = 0; p < c.size(); ++p)
            total += c[p] * std::pow(len, static_cast<double>(p + 1)) / static_cast<double>(p + 1);
    }
    return total;
}

void PiecewisePoly::shift(double c) {
    for (auto& piece : coef_) piece[0] += c;
}

void PiecewisePoly::scale(double s) {
    for (auto& piece : coef_)
        for (auto& v : piece) v *= s;
}

// ---------------------------------------------------------------------------
// FourierSeries

FourierSeries::FourierSeries(std::vector<std::complex<double>> modes) : modes_(std::move(modes)) {}

FourierSeries FourierSeries::from_profile_oscillation(const PeriodicIndex& idx) {
    if (idx.kind() != ProfileKind::Trigonometric)
        throw std::invalid_argument("FourierSeries: trigonometric profile required");
    const auto& a = idx.cos_coefficients();
    const auto& b = idx.sin_coefficients();
    std::vector<std::complex<double>> modes(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        modes[k] = std::complex<double>(a[k] / 2.0, -b[k] / 2.0);
    return FourierSeries(std::move(modes));
}

double FourierSeries::eval(double y) const {
    double s = 0.0;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        const double arg = two_pi * static_cast<double>(k + 1) * y;
        s += 2.0 * (modes_[k].real() * std::cos(arg) - modes_[k].imag() * std::sin(arg));
    }
    return s;
}

FourierSeries FourierSeries::derivative() const {
    std::vector<std::complex<double>> out(modes_.size());
    for (std::size_t k = 0; k < modes_.size(); ++k)
        out[k] = modes_[k] * std::complex<double>(0.0, two_pi * static_cast<double>(k + 1));
    return FourierSeries(std::move(out));
}

FourierSeries FourierSeries::solve_minus_laplace() const {
    std::vector<std::complex<double>> out(modes_.size());
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        const double om = two_pi * static_cast<double>(k + 1);
        out[k] = modes_[k] / (om * om);
    }
    return FourierSeries(std::move(out));
}

FourierSeries FourierSeries::scaled(double s) const {
    std::vector<std::complex<double>> out(modes_);
    for (auto& c : out) c *= s;
    return FourierSeries(std::move(out));
}

// ---------------------------------------------------------------------------
// Generic periodic Poisson path

PeriodicSolution solve_periodic_poisson_full(std::span<const double> rhs, const Grid& g) {
    if (static_cast<int>(rhs.size()) != g.m())
        throw std::invalid_argument("solve_periodic_poisson: sample length mismatch");
    double scale = 1.0;
    for (double v : rhs) scale = std::max(scale, std::abs(v));
    const double mean = integrate(rhs, g);
    if (std::abs(mean) > 1e-6 * scale)
        throw ConsistencyError("solve_periodic_poisson: rhs cell average is not zero");

    std::vector<double> r(rhs.begin(), rhs.end());
    for (auto& v : r) v -= mean;  // project to exact zero mean

    // -u'' = r: u' = c1 - R with R the zero-based antiderivative of r,
    // c1 chosen so that u' integrates to zero; then integrate once more and
    // remove the mean of u.
    std::vector<double> R = cumulative_integral(r, g);
    const double c1 = integrate(R, g);
    PeriodicSolution sol;
    sol.derivative.resize(g.m());
    for (int j = 0; j < g.m(); ++j) sol.derivative[j] = c1 - R[j];
    sol.value = cumulative_integral(sol.derivative, g);
    const double mu = integrate(sol.value, g);
    for (auto& v : sol.value) v -= mu;
    return sol;
}

std::vector<double> solve_periodic_poisson(std::span<const double> rhs, const Grid& g) {
    return solve_periodic_poisson_full(rhs, g).value;
}

std::vector<double> solve_beta(const PeriodicIndex& idx, const Grid& g) {
    const double nb = idx.cell_average();
    return solve_periodic_poisson(
        g.sample([&](double y) { return nb - idx.value_sided_mean(y); }), g);
}

std::vector<double> solve_chi(const PeriodicIndex& idx, const Grid& g) {
    const double nb = idx.cell_average();
    return solve_periodic_poisson(
        g.sample([&](double y) { return (nb - idx.value_sided_mean(y)) / (nb - 1.0); }), g);
}

std::vector<double> solve_gamma(std::span<const double> chi, const Grid& g) {
    std::vector<double> rhs = torus_first_difference(chi, g);
    for (auto& v : rhs) v *= 2.0;
    return solve_periodic_poisson(rhs, g);
}

std::vector<double> solve_alpha(std::span<const double> chi, const Grid& g) {
    return solve_periodic_poisson(chi, g);
}

std::vector<double> solve_B(std::span<const double> gamma, const Grid& g) {
    std::vector<double> rhs = torus_first_difference(gamma, g);
    for (auto& v : rhs) v *= 2.0;
    return solve_periodic_poisson(rhs, g);
}

// ---------------------------------------------------------------------------
// CellFunctions

namespace {

// Exact piecewise path: solve -u'' = r for a piecewise-polynomial rhs.
PiecewisePoly solve_poisson_poly(const PiecewisePoly& r) {
    PiecewisePoly R = r.antiderivative(0.0);
    PiecewisePoly uprime = R;                 // u' = mean(R) - R
    uprime.scale(-1.0);
    uprime.shift(R.mean());
    PiecewisePoly u = uprime.antiderivative(0.0);
    u.shift(-u.mean());
    return u;
}

}  // namespace

CellFunctions::CellFunctions(const PeriodicIndex& idx, const Grid& g)
    : grid_(g), n_bar_(idx.cell_average()), kind_(idx.kind()) {
    const double nb = n_bar_;

    auto fill_from_poly = [&](Field& f, const PiecewisePoly& p) {
        f.poly = std::make_shared<PiecewisePoly>(p);
        f.poly_deriv = std::make_shared<PiecewisePoly>(p.derivative());
        f.value.resize(grid_.m());
        f.deriv.resize(grid_.m());
        for (int j = 0; j < grid_.m(); ++j) {
            f.value[j] = f.poly->eval(grid_.x(j));
            f.deriv[j] = f.poly_deriv->eval(grid_.x(j));
        }
    };
    auto fill_from_fourier = [&](Field& f, const FourierSeries& s) {
        f.fourier = std::make_shared<FourierSeries>(s);
        f.fourier_deriv = std::make_shared<FourierSeries>(s.derivative());
        f.value.resize(grid_.m());
        f.deriv.resize(grid_.m());
        for (int j = 0; j < grid_.m(); ++j) {
            f.value[j] = f.fourier->eval(grid_.x(j));
            f.deriv[j] = f.fourier_deriv->eval(grid_.x(j));
        }
    };

    if (kind_ == ProfileKind::Piecewise) {
        // beta'' = n - nb, so -beta'' = nb - n.
        const auto& bps = idx.breakpoints();
        const auto& vals = idx.values();
        std::vector<std::vector<double>> rc(bps.size());
        for (std::size_t i = 0; i < bps.size(); ++i) rc[i] = {nb - vals[i]};
        PiecewisePoly rhs_beta(bps, std::move(rc));
        PiecewisePoly beta_p = solve_poisson_poly(rhs_beta);
        PiecewisePoly chi_p = beta_p;
        chi_p.scale(1.0 / (nb - 1.0));
        PiecewisePoly gamma_rhs = chi_p.derivative();
        gamma_rhs.scale(2.0);
        PiecewisePoly gamma_p = solve_poisson_poly(gamma_rhs);
        PiecewisePoly alpha_p = solve_poisson_poly(chi_p);
        PiecewisePoly b_rhs = gamma_p.derivative();
        b_rhs.scale(2.0);
        PiecewisePoly b_p = solve_poisson_poly(b_rhs);
        fill_from_poly(beta_, beta_p);
        fill_from_poly(chi_, chi_p);
        fill_from_poly(gamma_, gamma_p);
        fill_from_poly(alpha_, alpha_p);
        fill_from_poly(bmat_, b_p);
    } else if (kind_ == ProfileKind::Trigonometric) {
        FourierSeries osc = FourierSeries::from_profile_oscillation(idx);
        // -beta'' = nb - n = -osc
        FourierSeries beta_s = osc.scaled(-1.0).solve_minus_laplace();
        FourierSeries chi_s = beta_s.scaled(1.0 / (nb - 1.0));
        FourierSeries gamma_s = chi_s.derivative().scaled(2.0).solve_minus_laplace();
        FourierSeries alpha_s = chi_s.solve_minus_laplace();
        FourierSeries b_s = gamma_s.derivative().scaled(2.0).solve_minus_laplace();
        fill_from_fourier(beta_, beta_s);
        fill_from_fourier(chi_, chi_s);
        fill_from_fourier(gamma_, gamma_s);
        fill_from_fourier(alpha_, alpha_s);
        fill_from_fourier(bmat_, b_s);
    } else {
        auto fill = [&](Field& f, PeriodicSolution s) {
            f.value = std::move(s.value);
            f.deriv = std::move(s.derivative);
        };
        fill(beta_, solve_periodic_poisson_full(
                        grid_.sample([&](double y) { return nb - idx.value_sided_mean(y); }),
                        grid_));
        std::vector<double> chi_v(beta_.value), chi_d(beta_.deriv);
        for (auto& v : chi_v) v /= (nb - 1.0);
        for (auto& v : chi_d) v /= (nb - 1.0);
        chi_.value = chi_v;
        chi_.deriv = chi_d;
        std::vector<double> g_rhs(chi_.deriv);
        for (auto& v : g_rhs) v *= 2.0;
        fill(gamma_, solve_periodic_poisson_full(g_rhs, grid_));
        fill(alpha_, solve_periodic_poisson_full(chi_.value, grid_));
        std::vector<double> b_rhs(gamma_.deriv);
        for (auto& v : b_rhs) v *= 2.0;
        fill(bmat_, solve_periodic_poisson_full(b_rhs, grid_));
    }
}

const CellFunctions::Field& CellFunctions::field(CellField f) const {
    switch (f) {
        case CellField::Beta: return beta_;
        case CellField::Chi: return chi_;
        case CellField::Gamma: return gamma_;
        case CellField::Alpha: return alpha_;
        case CellField::Bmat: return bmat_;
    }
    throw std::invalid_argument("CellFunctions: unknown field");
}

const std::vector<double>& CellFunctions::value(CellField f) const { return field(f).value; }
const std::vector<double>& CellFunctions::derivative(CellField f) const { return field(f).deriv; }

double CellFunctions::eval(CellField f, double y) const {
    const Field& fd = field(f);
    if (fd.poly) return fd.poly->eval(y);
    if (fd.fourier) return fd.fourier->eval(y);
    return torus_interpolate(fd.value, y);
}

double CellFunctions::eval_derivative(CellField f, double y) const {
    const Field& fd = field(f);
    if (fd.poly_deriv) return fd.poly_deriv->eval(y);
    if (fd.fourier_deriv) return fd.fourier_deriv->eval(y);
    return torus_interpolate(fd.deriv, y);
}

}  // namespace tehomog
