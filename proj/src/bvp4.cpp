#include "tehomog/bvp4.hpp"

#include <cmath>
#include <utility>

namespace tehomog {

CoefficientField CoefficientField::constant(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("CoefficientField: a must be positive");
    CoefficientField f;
    f.a_const_ = a;
    return f;
}

CoefficientField CoefficientField::oscillatory(PeriodicIndex idx, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("CoefficientField: eps must lie in (0,1)");
    CoefficientField f;
    f.idx_ = std::move(idx);
    f.eps_ = eps;
    return f;
}

double CoefficientField::at_midpoints(double x, double h) const {
    if (is_constant()) return a_const_;
    const double nl = idx_->value_scaled(x - 0.5 * h, eps_);
    const double nr = idx_->value_scaled(x + 0.5 * h, eps_);
    return 1.0 / (0.5 * (nl + nr) - 1.0);  // harmonic mean of a = 1/(n-1)
}

double CoefficientField::at_point(double x) const {
    if (is_constant()) return a_const_;
    return 1.0 / (idx_->value_scaled(x, eps_) - 1.0);
}

void CoefficientField::require_resolved(const Grid& g) const {
    if (is_constant()) return;
    if (eps_ / g.h() < 16.0 - 1e-12)
        throw ResolutionError("oscillatory solve needs >= 16 grid intervals per period");
}

namespace {

// Coupled system, unknowns interleaved (u_0, v_0, u_1, v_1, ...):
//   a_j (D2 u + tau u)_j - v_j = 0            at interior j
//   (D2 v + tau v)_j + tau^2 u_j = h_j        at interior j
// closed by u(0), u'(0), u(1), u'(1) with 4-point one-sided stencils for u'.
BvpSolution solve_system(const CoefficientField& a, double tau, std::span<const double> h,
                         const CauchyData& bc, const Grid& g) {
    if (!(tau > 0.0)) throw std::invalid_argument("bvp4: tau must be positive");
    if (static_cast<int>(h.size()) != g.m())
        throw std::invalid_argument("bvp4: rhs sample length mismatch");
    a.require_resolved(g);

    const int m = g.m();
    const double hx = g.h();
    const double ih2 = 1.0 / (hx * hx);
    const int n = 2 * m;
    BandMatrix mat(n, 7, 7);
    std::vector<double> rhs(n, 0.0);

    mat.at(0, 0) = 1.0;
    rhs[0] = bc.u0;
    const double c1[4] = {-11.0, 18.0, -9.0, 2.0};
    for (int k = 0; k < 4; ++k) mat.at(1, 2 * k) = c1[k] / (6.0 * hx);
    rhs[1] = bc.du0;

    for (int j = 1; j + 1 < m; ++j) {
        const double aj = a.at_midpoints(g.x(j), hx);
        const int r1 = 2 * j, r2 = 2 * j + 1;
        mat.at(r1, 2 * (j - 1)) = aj * ih2;
        mat.at(r1, 2 * j) = aj * (-2.0 * ih2 + tau);
        mat.at(r1, 2 * (j + 1)) = aj * ih2;
        mat.at(r1, 2 * j + 1) = -1.0;
        mat.at(r2, 2 * (j - 1) + 1) = ih2;
        mat.at(r2, 2 * j + 1) = -2.0 * ih2 + tau;
        mat.at(r2, 2 * (j + 1) + 1) = ih2;
        mat.at(r2, 2 * j) = tau * tau;
        rhs[r2] = h[j];
    }

    const double c2[4] = {-2.0, 9.0, -18.0, 11.0};
    for (int k = 0; k < 4; ++k) mat.at(n - 2, 2 * (m - 4 + k)) = c2[k] / (6.0 * hx);
    rhs[n - 2] = bc.du1;
    mat.at(n - 1, 2 * (m - 1)) = 1.0;
    rhs[n - 1] = bc.u1;

    std::vector<double> z;
    try {
        z = solve_banded(mat, rhs);
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(e.pivot_index, e.pivot_magnitude,
                                  "bvp4: discrete system singular at this tau; "
                                  "perturb tau or refine the mesh");
    }
    BvpSolution sol{g, std::vector<double>(m), std::vector<double>(m), tau};
    for (int j = 0; j < m; ++j) {
        sol.u[j] = z[2 * j];
        sol.v[j] = z[2 * j + 1];
    }
    return sol;
}

}  // namespace

BvpSolution solve_clamped(const CoefficientField& a, double tau, std::span<const double> h,
                          const Grid& g) {
    return solve_system(a, tau, h, CauchyData{}, g);
}

BvpSolution solve_cauchy(const CoefficientField& a, double tau, std::span<const double> h,
                         const CauchyData& bc, const Grid& g) {
    for (double v : {bc.u0, bc.du0, bc.u1, bc.du1})
        if (!std::isfinite(v)) throw std::invalid_argument("bvp4: boundary data must be finite");
    return solve_system(a, tau, h, bc, g);
}

std::vector<double> apply_operator(const CoefficientField& a, double tau,
                                   std::span<const double> u, const Grid& g) {
    if (static_cast<int>(u.size()) != g.m())
        throw std::invalid_argument("apply_operator: sample length mismatch");
    const int m = g.m();
    const double ih2 = 1.0 / (g.h() * g.h());
    std::vector<double> w(m, 0.0), out(m, 0.0);
    for (int j = 1; j + 1 < m; ++j) {
        const double d2 = (u[j - 1] - 2.0 * u[j] + u[j + 1]) * ih2;
        w[j] = a.at_midpoints(g.x(j), g.h()) * (d2 + tau * u[j]);
    }
    for (int j = 2; j + 2 < m; ++j) {
        const double d2 = (w[j - 1] - 2.0 * w[j] + w[j + 1]) * ih2;
        out[j] = d2 + tau * w[j] + tau * tau * u[j];
    }
    return out;
}

}  // namespace tehomog
