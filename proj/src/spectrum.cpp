#include "tehomog/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace tehomog {

namespace {

void check_tau(double tau) {
    if (!(tau > kTauMin))
        throw std::invalid_argument("spectrum: tau must exceed tau_min = 1e-3");
}

// Collect the constant segments of n(x/eps) over [x0, x1].
struct Segment {
    double x0, x1, n;
};

std::vector<Segment> piecewise_segments(const PeriodicIndex& idx, double eps, double x0,
                                        double x1) {
    const auto& bps = idx.breakpoints();
    const auto& vals = idx.values();
    std::vector<Segment> segs;
    double x = x0;
    long k = static_cast<long>(std::floor(x0 / eps + 1e-15));
    while (x < x1 - 1e-15) {
        const double base = eps * static_cast<double>(k);
        for (std::size_t i = 0; i < bps.size(); ++i) {
            const double s0 = base + eps * bps[i];
            const double s1 = base + (i + 1 < bps.size() ? eps * bps[i + 1] : eps);
            const double lo = std::max(x, s0);
            const double hi = std::min(x1, s1);
            if (hi > lo + 1e-16) segs.push_back({lo, hi, vals[i]});
            x = std::max(x, hi);
            if (x >= x1 - 1e-15) break;
        }
        ++k;
    }
    return segs;
}

// Fourth-order Magnus step for w'' + q(x) w = 0 with Gauss-point samples of q.
Mat2 magnus_step(const std::function<double(double)>& q, double x, double dt) {
    const double gshift = std::sqrt(3.0) / 6.0 * dt;
    const double q1 = q(x + 0.5 * dt - gshift);
    const double q2 = q(x + 0.5 * dt + gshift);
    const double qb = 0.5 * (q1 + q2);
    const double d = std::sqrt(3.0) / 12.0 * dt * dt * (q2 - q1);
    // Omega = [[d, dt], [-dt*qb, -d]]; traceless, so exp is closed-form.
    const double detO = -d * d + dt * dt * qb;
    double c, s;  // exp(Omega) = c*I + s*Omega
    if (detO > 0.0) {
        const double ph = std::sqrt(detO);
        c = std::cos(ph);
        s = std::sin(ph) / ph;
    } else if (detO < 0.0) {
        const double ph = std::sqrt(-detO);
        c = std::cosh(ph);
        s = std::sinh(ph) / ph;
    } else {
        c = 1.0;
        s = 1.0;
    }
    Mat2 p;
    p.m00 = c + s * d;
    p.m01 = s * dt;
    p.m10 = -s * dt * qb;
    p.m11 = c - s * d;
    return p;
}

Mat2 propagate_smooth(const PeriodicIndex& idx, double eps, double tau, int steps_per_cell,
                      double x0, double x1) {
    auto q = [&](double x) { return tau * idx.value_scaled(x, eps); };
    const double dt = eps / steps_per_cell;
    Mat2 m;
    double x = x0;
    while (x < x1 - 1e-14) {
        const double step = std::min(dt, x1 - x);
        m = magnus_step(q, x, step) * m;
        x += step;
    }
    return m;
}

double det2(const Mat2& a) { return a.m00 * a.m11 - a.m01 * a.m10; }

}  // namespace

Mat2 Mat2::operator*(const Mat2& rhs) const {
    Mat2 r;
    r.m00 = m00 * rhs.m00 + m01 * rhs.m10;
    r.m01 = m00 * rhs.m01 + m01 * rhs.m11;
    r.m10 = m10 * rhs.m00 + m11 * rhs.m10;
    r.m11 = m10 * rhs.m01 + m11 * rhs.m11;
    return r;
}

Mat2 propagator_constant(double q, double length) {
    Mat2 p;
    if (q > 0.0) {
        const double s = std::sqrt(q);
        p.m00 = std::cos(s * length);
        p.m01 = std::sin(s * length) / s;
        p.m10 = -s * std::sin(s * length);
        p.m11 = p.m00;
    } else if (q < 0.0) {
        const double s = std::sqrt(-q);
        p.m00 = std::cosh(s * length);
        p.m01 = std::sinh(s * length) / s;
        p.m10 = s * std::sinh(s * length);
        p.m11 = p.m00;
    } else {
        p.m01 = length;
    }
    return p;
}

Mat2 matching_matrix_homog(double nbar, double tau) {
    if (!(nbar > 1.0)) throw std::invalid_argument("spectrum: nbar must exceed 1");
    check_tau(tau);
    const Mat2 mw = propagator_constant(nbar * tau, 1.0);
    const Mat2 mv = propagator_constant(tau, 1.0);
    Mat2 d;
    d.m00 = mw.m00 - mv.m00;
    d.m01 = mw.m01 - mv.m01;
    d.m10 = mw.m10 - mv.m10;
    d.m11 = mw.m11 - mv.m11;
    return d;
}

double determinant_homog(double nbar, double tau) { return det2(matching_matrix_homog(nbar, tau)); }

Mat2 transfer_matrix_eps(const PeriodicIndex& idx, double eps, double tau, int steps_per_cell) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("spectrum: eps must lie in (0,1)");
    if (steps_per_cell < 8) throw std::invalid_argument("spectrum: steps_per_cell must be >= 8");
    check_tau(tau);
    if (idx.kind() == ProfileKind::Piecewise) {
        Mat2 m;
        for (const Segment& s : piecewise_segments(idx, eps, 0.0, 1.0))
            m = propagator_constant(tau * s.n, s.x1 - s.x0) * m;
        return m;
    }
    return propagate_smooth(idx, eps, tau, steps_per_cell, 0.0, 1.0);
}

Mat2 matching_matrix_eps(const PeriodicIndex& idx, double eps, double tau, int steps_per_cell) {
    const Mat2 mw = transfer_matrix_eps(idx, eps, tau, steps_per_cell);
    const Mat2 mv = propagator_constant(tau, 1.0);
    Mat2 d;
    d.m00 = mw.m00 - mv.m00;
    d.m01 = mw.m01 - mv.m01;
    d.m10 = mw.m10 - mv.m10;
    d.m11 = mw.m11 - mv.m11;
    return d;
}

double determinant_eps(const PeriodicIndex& idx, double eps, double tau, int steps_per_cell) {
    return det2(matching_matrix_eps(idx, eps, tau, steps_per_cell));
}

bool is_simple_root(const std::function<double(double)>& det, double tau) {
    const double s = 1e-6 * std::max(1.0, std::abs(tau));
    const double d = (det(tau + s) - det(tau - s)) / (2.0 * s);
    return std::abs(d) > 1e-8 * std::max(1.0, std::abs(tau));
}

EigRoot find_eigenvalue(const std::function<double(double)>& det, double lo, double hi,
                        double tol) {
    EigRoot r;
    r.tau = find_root(det, lo, hi, tol);
    const double s = 1e-6 * std::max(1.0, std::abs(r.tau));
    r.det_derivative = (det(r.tau + s) - det(r.tau - s)) / (2.0 * s);
    r.simple = std::abs(r.det_derivative) > 1e-8 * std::max(1.0, std::abs(r.tau));
    return r;
}

std::vector<EigRoot> scan_eigenvalues(const std::function<double(double)>& det, double lo,
                                      double hi, double scan_step, double tol) {
    if (!(scan_step > 0.0)) throw std::invalid_argument("scan_eigenvalues: bad scan step");
    std::vector<EigRoot> roots;
    double x = std::max(lo, kTauMin + tol);
    double fx = det(x);
    while (x < hi) {
        const double y = std::min(x + scan_step, hi);
        const double fy = det(y);
        if (fx == 0.0) {
            EigRoot r;
            r.tau = x;
            r.simple = is_simple_root(det, x);
            roots.push_back(r);
        } else if (fx * fy < 0.0) {
            roots.push_back(find_eigenvalue(det, x, y, tol));
        }
        x = y;
        fx = fy;
    }
    return roots;
}

EigRoot find_nearest_eigenvalue(const std::function<double(double)>& det, double center,
                                double window, double scan_step, double tol) {
    for (double w : {window, 4.0 * window, 10.0 * window}) {
        const double lo = std::max(kTauMin + tol, center - w);
        auto roots = scan_eigenvalues(det, lo, center + w, scan_step, tol);
        if (!roots.empty()) {
            auto best = std::min_element(roots.begin(), roots.end(),
                                         [&](const EigRoot& a, const EigRoot& b) {
                                             return std::abs(a.tau - center) <
                                                    std::abs(b.tau - center);
                                         });
            return *best;
        }
    }
    throw BracketError("find_nearest_eigenvalue: no determinant root near requested tau");
}

namespace {

// Null direction of a (near) rank-1 2x2 matrix via the smaller singular pair
// of M^T M; throws when the matrix is near rank 0 (non-simple eigenvalue).
void null_vector(const Mat2& m, double scale, double& a, double& b) {
    const double p = m.m00 * m.m00 + m.m10 * m.m10;
    const double q = m.m01 * m.m01 + m.m11 * m.m11;
    const double r = m.m00 * m.m01 + m.m10 * m.m11;
    const double half = 0.5 * (p + q);
    const double disc = std::sqrt(0.25 * (p - q) * (p - q) + r * r);
    const double smax = std::sqrt(std::max(0.0, half + disc));
    if (smax <= 1e-8 * std::max(1.0, scale))
        throw NonSimpleError("extract_eigenpair: matching matrix is rank deficient beyond "
                             "a simple eigenvalue");
    const double lmin = std::max(0.0, half - disc);
    // (M^T M - lmin I) x = 0
    double vx, vy;
    if (std::abs(p - lmin) > std::abs(q - lmin)) {
        vx = -r;
        vy = p - lmin;
    } else {
        vx = q - lmin;
        vy = -r;
    }
    const double nrm = std::hypot(vx, vy);
    if (nrm == 0.0) {
        vx = 1.0;
        vy = 0.0;
    } else {
        vx /= nrm;
        vy /= nrm;
    }
    a = vx;
    b = vy;
}

Eigenpair assemble_pair(const Grid& g, double tau, double nbar_at0, double n_at_end,
                        std::vector<double> w, std::vector<double> v,
                        std::vector<double> n_samples, double a, double b, double w1,
                        double dw1) {
    Eigenpair pair{g, tau, std::move(w), std::move(v), {}, {}, a, b, true, 0, 0, 0, 0};
    const int m = g.m();
    pair.phi.resize(m);
    for (int j = 0; j < m; ++j) pair.phi[j] = pair.w[j] - pair.v[j];
    const double nrm = std::sqrt(inner_product(pair.phi, pair.phi, g));
    double sign = 1.0;
    if (std::abs(a) > 1e-12 * std::hypot(a, b))
        sign = a > 0.0 ? 1.0 : -1.0;
    else
        sign = b > 0.0 ? 1.0 : -1.0;
    const double scale = sign / nrm;
    pair.phipp.resize(m);
    for (int j = 0; j < m; ++j) {
        pair.w[j] *= scale;
        pair.v[j] *= scale;
        pair.phi[j] *= scale;
        pair.phipp[j] = -tau * (n_samples[j] * pair.w[j] - pair.v[j]);
    }
    pair.a0 = a * scale;
    pair.b0 = b * scale;
    // phi'' = -tau (n w - v); at x=0, w(0)=v(0)=a0, w'(0)=v'(0)=b0;
    // at x=1 the matching conditions give w(1)=v(1), w'(1)=v'(1).
    pair.phi2_0 = -tau * (nbar_at0 - 1.0) * pair.a0;
    pair.phi3_0 = -tau * (nbar_at0 - 1.0) * pair.b0;
    pair.phi2_1 = -tau * (n_at_end - 1.0) * (w1 * scale);
    pair.phi3_1 = -tau * (n_at_end - 1.0) * (dw1 * scale);
    return pair;
}

}  // namespace

Eigenpair extract_eigenpair_homog(double nbar, double tau, const Grid& g) {
    const Mat2 match = matching_matrix_homog(nbar, tau);
    const Mat2 mw = propagator_constant(nbar * tau, 1.0);
    double a, b;
    null_vector(match, 4.0, a, b);
    const double mu = std::sqrt(nbar * tau);
    const double lam = std::sqrt(tau);
    std::vector<double> w(g.m()), v(g.m()), ns(g.m(), nbar);
    for (int j = 0; j < g.m(); ++j) {
        const double x = g.x(j);
        w[j] = a * std::cos(mu * x) + b * std::sin(mu * x) / mu;
        v[j] = a * std::cos(lam * x) + b * std::sin(lam * x) / lam;
    }
    const double w1 = mw.m00 * a + mw.m01 * b;
    const double dw1 = mw.m10 * a + mw.m11 * b;
    return assemble_pair(g, tau, nbar, nbar, std::move(w), std::move(v), std::move(ns), a, b,
                         w1, dw1);
}

Eigenpair extract_eigenpair_eps(const PeriodicIndex& idx, double eps, double tau,
                                int steps_per_cell, const Grid& g) {
    const Mat2 match = matching_matrix_eps(idx, eps, tau, steps_per_cell);
    double a, b;
    null_vector(match, 4.0, a, b);
    const double lam = std::sqrt(tau);
    const int m = g.m();
    std::vector<double> w(m), v(m), ns(m);
    w[0] = a;
    v[0] = a;
    ns[0] = idx.value(0.0);
    double wj = a, dwj = b;
    for (int j = 1; j < m; ++j) {
        Mat2 step;
        if (idx.kind() == ProfileKind::Piecewise) {
            for (const Segment& s : piecewise_segments(idx, eps, g.x(j - 1), g.x(j)))
                step = propagator_constant(tau * s.n, s.x1 - s.x0) * step;
        } else {
            step = propagate_smooth(idx, eps, tau, steps_per_cell, g.x(j - 1), g.x(j));
        }
        const double wn = step.m00 * wj + step.m01 * dwj;
        const double dwn = step.m10 * wj + step.m11 * dwj;
        wj = wn;
        dwj = dwn;
        w[j] = wj;
        const double x = g.x(j);
        v[j] = a * std::cos(lam * x) + b * std::sin(lam * x) / lam;
        ns[j] = idx.value_scaled(x, eps);
    }
    // left limit of n at the right endpoint: y -> (1/eps)^- on the torus
    const double y_end = 1.0 / eps;
    const double n_end = idx.value(y_end - 1e-12);
    return assemble_pair(g, tau, idx.value(0.0), n_end, std::move(w), std::move(v),
                         std::move(ns), a, b, wj, dwj);
}

}  // namespace tehomog
