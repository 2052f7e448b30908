#include "tehomog/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tehomog {

Grid::Grid(int points) : m_(points), h_(1.0 / (points - 1)) {
    if (points < 9) throw std::invalid_argument("Grid: need at least 9 points");
}

std::vector<double> Grid::sample(const std::function<double(double)>& f) const {
    std::vector<double> out(m_);
    for (int j = 0; j < m_; ++j) out[j] = f(x(j));
    return out;
}

double integrate(std::span<const double> f, const Grid& g) {
    if (static_cast<int>(f.size()) != g.m())
        throw std::invalid_argument("integrate: sample length does not match grid");
    const int m = g.m();
    const double h = g.h();
    int intervals = m - 1;
    int simpson_end = intervals;          // index past the last Simpson interval
    if (intervals % 2 != 0) simpson_end = intervals - 1;
    double sum = 0.0;
    for (int j = 0; j + 2 <= simpson_end; j += 2)
        sum += (h / 3.0) * (f[j] + 4.0 * f[j + 1] + f[j + 2]);
    if (simpson_end != intervals)
        sum += 0.5 * h * (f[m - 2] + f[m - 1]);
    return sum;
}

double inner_product(std::span<const double> f, std::span<const double> w, const Grid& g) {
    if (f.size() != w.size())
        throw std::invalid_argument("inner_product: length mismatch");
    std::vector<double> prod(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) prod[j] = f[j] * w[j];
    return integrate(prod, g);
}

std::vector<double> second_difference(std::span<const double> u, const Grid& g) {
    if (static_cast<int>(u.size()) != g.m())
        throw std::invalid_argument("second_difference: sample length does not match grid");
    const int m = g.m();
    const double h2 = g.h() * g.h();
    std::vector<double> d(m);
    for (int j = 1; j + 1 < m; ++j)
        d[j] = (u[j - 1] - 2.0 * u[j] + u[j + 1]) / h2;
    d[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
    d[m - 1] = (2.0 * u[m - 1] - 5.0 * u[m - 2] + 4.0 * u[m - 3] - u[m - 4]) / h2;
    return d;
}

std::vector<double> first_difference(std::span<const double> u, const Grid& g) {
    if (static_cast<int>(u.size()) != g.m())
        throw std::invalid_argument("first_difference: sample length does not match grid");
    const int m = g.m();
    const double h = g.h();
    std::vector<double> d(m);
    for (int j = 1; j + 1 < m; ++j)
        d[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
    d[0] = (-11.0 * u[0] + 18.0 * u[1] - 9.0 * u[2] + 2.0 * u[3]) / (6.0 * h);
    d[m - 1] = (11.0 * u[m - 1] - 18.0 * u[m - 2] + 9.0 * u[m - 3] - 2.0 * u[m - 4]) / (6.0 * h);
    return d;
}

Norms discrete_norms(std::span<const double> u, const Grid& g) {
    Norms n;
    std::vector<double> sq(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) sq[j] = u[j] * u[j];
    n.l2 = std::sqrt(std::max(0.0, integrate(sq, g)));
    std::vector<double> d2 = second_difference(u, g);
    for (std::size_t j = 0; j < d2.size(); ++j) sq[j] = d2[j] * d2[j];
    n.h2 = std::sqrt(std::max(0.0, integrate(sq, g)));
    return n;
}

double torus_interpolate(std::span<const double> samples, double y) {
    const int intervals = static_cast<int>(samples.size()) - 1;
    if (intervals < 3) throw std::invalid_argument("torus_interpolate: too few samples");
    const double yw = y - std::floor(y);
    const double t = yw * intervals;
    int j = static_cast<int>(std::floor(t));
    if (j >= intervals) j = intervals - 1;
    const double u = t - j;
    auto at = [&](int k) {
        int i = ((k % intervals) + intervals) % intervals;
        return samples[i];
    };
    const double f0 = at(j - 1), f1 = at(j), f2 = at(j + 1), f3 = at(j + 2);
    // cubic through (-1, f0), (0, f1), (1, f2), (2, f3) evaluated at u
    return f1 + u * ((f2 - f0) / 2.0 +
                     u * ((f0 - 2.0 * f1 + f2) / 2.0 +
                          u * ((f3 - f0) / 6.0 + (f1 - f2) / 2.0)));
}

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), d_(static_cast<std::size_t>(kl + ku + 1) * n, 0.0) {
    if (n <= 0 || kl < 0 || ku < 0 || kl >= n || ku >= n)
        throw std::invalid_argument("BandMatrix: bad shape");
}

double& BandMatrix::at(int i, int j) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || j - i > ku_ || i - j > kl_)
        throw std::out_of_range("BandMatrix::at outside band");
    return d_[static_cast<std::size_t>(ku_ + i - j) * n_ + j];
}

double BandMatrix::get(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || j - i > ku_ || i - j > kl_) return 0.0;
    return d_[static_cast<std::size_t>(ku_ + i - j) * n_ + j];
}

std::vector<double> BandMatrix::multiply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("BandMatrix::multiply: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const int jlo = std::max(0, i - kl_);
        const int jhi = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (int j = jlo; j <= jhi; ++j) s += get(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double BandMatrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
        const int jlo = std::max(0, i - kl_);
        const int jhi = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (int j = jlo; j <= jhi; ++j) s += std::abs(get(i, j));
        best = std::max(best, s);
    }
    return best;
}

SingularMatrixError::SingularMatrixError(int pivot, double magnitude)
    : std::runtime_error("solve_banded: numerically singular at pivot " + std::to_string(pivot)),
      pivot_index(pivot),
      pivot_magnitude(magnitude) {}

SingularMatrixError::SingularMatrixError(int pivot, double magnitude, const std::string& message)
    : std::runtime_error(message), pivot_index(pivot), pivot_magnitude(magnitude) {}

std::vector<double> solve_banded(const BandMatrix& a, std::span<const double> rhs) {
    const int n = a.size();
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("solve_banded: rhs size mismatch");
    const int kl = a.lower();
    const int ku = a.upper();
    const int width = 2 * kl + ku + 1;  // room for pivoting fill
    const double anorm = a.inf_norm();
    const double tol = 1e-14 * anorm;

    // Row-major working copy; row i holds columns [i-kl, i+kl+ku].
    std::vector<double> w(static_cast<std::size_t>(n) * width, 0.0);
    auto idx = [&](int i, int j) { return static_cast<std::size_t>(i) * width + (j - i + kl); };
    for (int i = 0; i < n; ++i) {
        const int jlo = std::max(0, i - kl);
        const int jhi = std::min(n - 1, i + ku);
        for (int j = jlo; j <= jhi; ++j) w[idx(i, j)] = a.get(i, j);
    }
    std::vector<double> b(rhs.begin(), rhs.end());

    for (int k = 0; k < n; ++k) {
        const int ilast = std::min(n - 1, k + kl);
        int p = k;
        double pmax = std::abs(w[idx(k, k)]);
        for (int i = k + 1; i <= ilast; ++i) {
            const double v = std::abs(w[idx(i, k)]);
            if (v > pmax) {
                pmax = v;
                p = i;
            }
        }
        if (!(pmax > tol))
            throw SingularMatrixError(k, pmax);
        const int jhi = std::min(n - 1, k + kl + ku);
        if (p != k) {
            for (int j = k; j <= jhi; ++j) std::swap(w[idx(k, j)], w[idx(p, j)]);
            std::swap(b[k], b[p]);
        }
        const double piv = w[idx(k, k)];
        for (int i = k + 1; i <= ilast; ++i) {
            const double l = w[idx(i, k)] / piv;
            if (l == 0.0) continue;
            w[idx(i, k)] = 0.0;
            for (int j = k + 1; j <= jhi; ++j) w[idx(i, j)] -= l * w[idx(k, j)];
            b[i] -= l * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        const int jhi = std::min(n - 1, i + kl + ku);
        double s = b[i];
        for (int j = i + 1; j <= jhi; ++j) s -= w[idx(i, j)] * b[j];
        b[i] = s / w[idx(i, i)];
    }
    return b;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");
    if (!(lo < hi)) throw std::invalid_argument("find_root: empty bracket");
    double fa = f(lo), fb = f(hi);
    if (fa == 0.0) return lo;
    if (fb == 0.0) return hi;
    if (fa * fb > 0.0) throw BracketError("find_root: no sign change on bracket");

    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
        if (b - a <= tol) break;
        double c;
        const double denom = fb - fa;
        if (denom != 0.0) {
            c = a - fa * (b - a) / denom;  // secant through bracket ends
            const double margin = 0.01 * (b - a);
            if (!(c > a + margin && c < b - margin)) c = 0.5 * (a + b);
        } else {
            c = 0.5 * (a + b);
        }
        const double fc = f(c);
        if (fc == 0.0) return c;
        if (fa * fc < 0.0) {
            b = c;
            fb = fc;
        } else {
            a = c;
            fa = fc;
        }
    }
    if (b - a > tol) throw ConvergenceError("find_root: iteration limit reached");
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

RateStudy fit_rate(std::vector<RateSample> samples) {
    if (samples.size() < 3)
        throw std::invalid_argument("fit_rate: need at least 3 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].eps > 0.0)) throw std::invalid_argument("fit_rate: eps must be positive");
        if (samples[i].err < 0.0) throw std::invalid_argument("fit_rate: err must be nonnegative");
        for (std::size_t k = 0; k < i; ++k)
            if (samples[k].eps == samples[i].eps)
                throw std::invalid_argument("fit_rate: eps values must be distinct");
    }
    RateStudy study;
    study.samples = std::move(samples);
    for (const auto& s : study.samples) {
        if (s.err == 0.0) {
            study.degenerate = true;
            study.slope = std::numeric_limits<double>::infinity();
            study.r2 = 0.0;
            return study;
        }
    }
    const std::size_t n = study.samples.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(study.samples[i].eps);
        ly[i] = std::log(study.samples[i].err);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    study.slope = sxy / sxx;
    const double ssres = syy - study.slope * sxy;
    study.r2 = syy > 0.0 ? std::max(0.0, 1.0 - ssres / syy) : 1.0;
    return study;
}

}  // namespace tehomog
