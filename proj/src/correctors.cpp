#include "tehomog/correctors.hpp"

#include <cmath>

namespace tehomog {

CutoffDelta cutoff(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("cutoff: eps must be positive");
    const double inv = 1.0 / eps;
    double n = std::floor(inv);
    double delta = inv - n;
    if (delta > 1.0 - 1e-9) {  // snap when 1/eps sits a rounding error below an integer
        n += 1.0;
        delta = 0.0;
    }
    return CutoffDelta{eps, static_cast<long>(n), delta};
}

SlowField slow_field_from_homog(const BvpSolution& sol, double a_const,
                                std::span<const double> h) {
    SlowField f;
    f.tau = sol.tau;
    f.u0 = sol.u;
    const int m = sol.grid.m();
    f.s0.resize(m);
    for (int j = 0; j < m; ++j) f.s0[j] = sol.v[j] / a_const;
    f.s1 = first_difference(f.s0, sol.grid);
    f.s0_at0 = f.s0.front();
    f.s0_at1 = f.s0.back();
    f.s1_at0 = f.s1.front();
    f.s1_at1 = f.s1.back();
    // v'' = h - tau^2 u - tau v, hence s0'' = (h - tau^2 u - tau v)/a
    f.s0pp_at0 = (h.front() - sol.tau * sol.tau * sol.u.front() - sol.tau * sol.v.front()) / a_const;
    f.s0pp_at1 = (h.back() - sol.tau * sol.tau * sol.u.back() - sol.tau * sol.v.back()) / a_const;
    return f;
}

SlowField slow_field_from_eigenpair(const Eigenpair& pair, double nbar) {
    SlowField f;
    f.tau = pair.tau;
    const int m = pair.grid.m();
    const double mu = std::sqrt(nbar * pair.tau);
    f.u0.resize(m);
    f.s0.resize(m);
    f.s1.resize(m);
    for (int j = 0; j < m; ++j) {
        const double x = pair.grid.x(j);
        f.u0[j] = pair.phi[j] / pair.tau;
        f.s0[j] = (1.0 - nbar) * pair.w[j];
        const double dw = -pair.a0 * mu * std::sin(mu * x) + pair.b0 * std::cos(mu * x);
        f.s1[j] = (1.0 - nbar) * dw;
    }
    f.s0_at0 = f.s0.front();
    f.s0_at1 = f.s0.back();
    f.s1_at0 = f.s1.front();
    f.s1_at1 = f.s1.back();
    // w'' = -nbar tau w, so s0'' = -nbar tau s0
    f.s0pp_at0 = -nbar * pair.tau * f.s0_at0;
    f.s0pp_at1 = -nbar * pair.tau * f.s0_at1;
    return f;
}

ExpansionTerms build_expansion(const SlowField& slow, const CellFunctions& cells, double eps,
                               double a_homog, const Grid& g) {
    if (static_cast<int>(slow.u0.size()) != g.m())
        throw std::invalid_argument("build_expansion: slow field does not match grid");
    if (eps / g.h() < 16.0 - 1e-12)
        throw ResolutionError("build_expansion: grid must resolve eps (>= 16 intervals/period)");

    ExpansionTerms t;
    t.eps = eps;
    t.tau = slow.tau;
    t.u0 = slow.u0;
    const int m = g.m();
    t.v0.resize(m);
    t.u2.resize(m);
    t.u3.resize(m);
    for (int j = 0; j < m; ++j) {
        const double y = g.x(j) / eps;
        t.v0[j] = a_homog * slow.s0[j];
        t.u2[j] = cells.eval(CellField::Chi, y) * slow.s0[j];
        t.u3[j] = cells.eval(CellField::Gamma, y) * slow.s1[j];
    }
    const double delta = cutoff(eps).delta;
    const double chi0 = cells.eval(CellField::Chi, 0.0);
    const double chid = cells.eval(CellField::Chi, delta);
    const double chip0 = cells.eval_derivative(CellField::Chi, 0.0);
    const double chipd = cells.eval_derivative(CellField::Chi, delta);
    const double gam0 = cells.eval(CellField::Gamma, 0.0);
    const double gamd = cells.eval(CellField::Gamma, delta);
    const double gamp0 = cells.eval_derivative(CellField::Gamma, 0.0);
    const double gampd = cells.eval_derivative(CellField::Gamma, delta);

    t.u2_0 = chi0 * slow.s0_at0;
    t.u2_1 = chid * slow.s0_at1;
    t.du2_0 = chip0 / eps * slow.s0_at0 + chi0 * slow.s1_at0;
    t.du2_1 = chipd / eps * slow.s0_at1 + chid * slow.s1_at1;
    t.u3_0 = gam0 * slow.s1_at0;
    t.u3_1 = gamd * slow.s1_at1;
    t.du3_0 = gamp0 / eps * slow.s1_at0 + gam0 * slow.s0pp_at0;
    t.du3_1 = gampd / eps * slow.s1_at1 + gamd * slow.s0pp_at1;
    return t;
}

BvpSolution solve_theta_eps(int order, const PeriodicIndex& idx, double eps, double tau,
                            const ExpansionTerms& terms, const Grid& g) {
    if (order != 2 && order != 3)
        throw std::invalid_argument("solve_theta_eps: order must be 2 or 3");
    CauchyData bc;
    if (order == 2) {
        bc.u0 = -eps * terms.u2_0;
        bc.du0 = -eps * terms.du2_0;
        bc.u1 = -eps * terms.u2_1;
        bc.du1 = -eps * terms.du2_1;
    } else {
        bc.u0 = -eps * terms.u3_0;
        bc.du0 = -eps * terms.du3_0;
        bc.u1 = -eps * terms.u3_1;
        bc.du1 = -eps * terms.du3_1;
    }
    const std::vector<double> zero(g.m(), 0.0);
    return solve_cauchy(CoefficientField::oscillatory(idx, eps), tau, zero, bc, g);
}

BvpSolution solve_theta_star(double nbar, double tau0, double phi2_0, double phi2_1,
                             double beta_prime_0, double beta_prime_delta, const Grid& g) {
    CauchyData bc;
    bc.u0 = 0.0;
    bc.u1 = 0.0;
    bc.du0 = -beta_prime_0 * phi2_0 / (tau0 * (nbar - 1.0));
    bc.du1 = -beta_prime_delta * phi2_1 / (tau0 * (nbar - 1.0));
    const std::vector<double> zero(g.m(), 0.0);
    return solve_cauchy(CoefficientField::constant(1.0 / (nbar - 1.0)), tau0, zero, bc, g);
}

}  // namespace tehomog
