#include "tehomog/eigen_correction.hpp"

#include <cmath>

namespace tehomog {

namespace {

double phi_prime_norm_sq(const Eigenpair& pair) {
    // ||phi'||^2 = -<phi'', phi>
    return -inner_product(pair.phipp, pair.phi, pair.grid);
}

// Re-normalized copy: correction quantities are functions of the eigenspace,
// not of the representative.
Eigenpair normalized(const Eigenpair& pair) {
    Eigenpair p = pair;
    const double nrm = std::sqrt(inner_product(p.phi, p.phi, p.grid));
    const double s = 1.0 / nrm;
    for (auto& v : p.w) v *= s;
    for (auto& v : p.v) v *= s;
    for (auto& v : p.phi) v *= s;
    for (auto& v : p.phipp) v *= s;
    p.a0 *= s;
    p.b0 *= s;
    p.phi2_0 *= s;
    p.phi2_1 *= s;
    p.phi3_0 *= s;
    p.phi3_1 *= s;
    return p;
}

}  // namespace

std::vector<double> apply_L_inverse(double nbar, double tau0, std::span<const double> rhs,
                                    const Grid& g) {
    if (!(nbar > 1.0)) throw std::invalid_argument("apply_L_inverse: nbar must exceed 1");
    return solve_clamped(CoefficientField::constant(1.0 / (nbar - 1.0)), tau0, rhs, g).u;
}

BvpSolution apply_T0(double nbar, double tau, std::span<const double> f, const Grid& g) {
    const std::vector<double> lap = second_difference(f, g);
    BvpSolution s = solve_clamped(CoefficientField::constant(1.0 / (nbar - 1.0)), tau, lap, g);
    for (auto& v : s.u) v = -v;
    for (auto& v : s.v) v = -v;
    return s;
}

std::vector<double> apply_DT0(double nbar, double tau, std::span<const double> u,
                              const Grid& g) {
    const BvpSolution s = apply_T0(nbar, tau, u, g);
    // (2/(nbar-1)) (D^2 + tau nbar) s = 2 (v + tau s) with v = a (D^2+tau) s
    std::vector<double> arg(g.m());
    for (int j = 0; j < g.m(); ++j) arg[j] = 2.0 * (s.v[j] + tau * s.u[j]);
    std::vector<double> r = apply_L_inverse(nbar, tau, arg, g);
    for (auto& v : r) v = -v;
    return r;
}

std::vector<double> adjoint_eigenfunction(const Eigenpair& pair) {
    const double pnorm = phi_prime_norm_sq(pair);
    std::vector<double> psi(pair.phipp.size());
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = -pair.phipp[j] / pnorm;
    return psi;
}

DenominatorReport denominator_phi_pairing(double nbar, const Eigenpair& raw, const Grid& g) {
    const Eigenpair pair = normalized(raw);
    const double tau = pair.tau;
    DenominatorReport rep;
    const std::vector<double> dt = apply_DT0(nbar, tau, pair.phi, g);
    rep.operator_route = 1.0 + tau * tau * inner_product(dt, pair.phi, g);
    const std::vector<double> w = apply_L_inverse(nbar, tau, pair.phi, g);
    const double ip = inner_product(w, pair.phi, g);
    rep.closed_form = (nbar + 1.0 - 2.0 * tau * tau * nbar * ip) / (nbar - 1.0);
    return rep;
}

DenominatorReport denominator_adjoint_pairing(double nbar, const Eigenpair& raw, const Grid& g) {
    const Eigenpair pair = normalized(raw);
    const double tau = pair.tau;
    DenominatorReport rep;
    const std::vector<double> psi = adjoint_eigenfunction(pair);
    const std::vector<double> dt = apply_DT0(nbar, tau, pair.phi, g);
    rep.operator_route = 1.0 + tau * tau * inner_product(dt, psi, g);
    const double pnorm = phi_prime_norm_sq(pair);
    rep.closed_form = ((nbar + 1.0) * pnorm - 2.0 * tau * nbar) / ((nbar - 1.0) * pnorm);
    return rep;
}

double denominator(double nbar, const Eigenpair& pair, const Grid& g) {
    const DenominatorReport rep = denominator_adjoint_pairing(nbar, pair, g);
    if (std::abs(rep.operator_route - rep.closed_form) >
        1e-4 * std::max(1.0, std::abs(rep.closed_form)))
        throw ConsistencyError("denominator: operator route disagrees with closed form");
    if (std::abs(rep.closed_form) <= 1e-8)
        throw DegenerateDenominatorError("denominator: correction denominator vanishes");
    return rep.closed_form;
}

double numerator_direct(const PeriodicIndex& idx, double eps, const Eigenpair& pair,
                        std::span<const double> weight, const Grid& g) {
    const double tau = pair.tau;
    const double nbar = idx.cell_average();
    // T phi = -L^{-1} phi'', so <(T0 - Teps) phi, w> = <u_eps - u_0, w>
    // with u_sigma = L_sigma^{-1} phi''.
    const std::vector<double> u0 =
        solve_clamped(CoefficientField::constant(1.0 / (nbar - 1.0)), tau, pair.phipp, g).u;
    const std::vector<double> ue =
        solve_clamped(CoefficientField::oscillatory(idx, eps), tau, pair.phipp, g).u;
    std::vector<double> diff(g.m());
    for (int j = 0; j < g.m(); ++j) diff[j] = ue[j] - u0[j];
    return inner_product(diff, weight, g);
}

CorrectionReport correction(const PeriodicIndex& idx, const Eigenpair& raw,
                            const CellFunctions& cells, double delta, const Grid& g,
                            CorrectionMode mode, double eps) {
    const Eigenpair pair = normalized(raw);
    if (!pair.simple)
        throw NonSimpleError("correction: requires a simple eigenvalue");
    const double nbar = idx.cell_average();
    const double tau0 = pair.tau;

    CorrectionReport rep;
    rep.tau0 = tau0;
    rep.delta = delta;
    rep.mode = mode;
    rep.eps = eps;

    const DenominatorReport den = denominator_adjoint_pairing(nbar, pair, g);
    rep.denominator = den.closed_form;
    rep.denominator_guard = std::abs(rep.denominator) > 1e-8;
    if (!rep.denominator_guard)
        throw DegenerateDenominatorError("correction: denominator below guard tolerance");

    std::vector<double> theta;
    if (mode == CorrectionMode::ThetaStar) {
        const double bp0 = cells.eval_derivative(CellField::Beta, 0.0);
        const double bpd = cells.eval_derivative(CellField::Beta, delta);
        theta = solve_theta_star(nbar, tau0, pair.phi2_0, pair.phi2_1, bp0, bpd, g).u;
    } else {
        if (!(eps > 0.0)) throw std::invalid_argument("correction: ThetaEps mode needs eps > 0");
        const SlowField slow = slow_field_from_eigenpair(pair, nbar);
        const ExpansionTerms terms =
            build_expansion(slow, cells, eps, 1.0 / (nbar - 1.0), g);
        theta = solve_theta_eps(2, idx, eps, tau0, terms, g).u;
    }
    const std::vector<double> psi = adjoint_eigenfunction(pair);
    rep.numerator_inner = inner_product(theta, psi, g);
    rep.tau1 = -tau0 * tau0 * rep.numerator_inner / rep.denominator;
    return rep;
}

}  // namespace tehomog
