#pragma once

#include "tehomog/bvp4.hpp"
#include "tehomog/cell_problems.hpp"
#include "tehomog/correctors.hpp"
#include "tehomog/spectrum.hpp"

namespace tehomog {

class DegenerateDenominatorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// w = L_{tau,0}^{-1} rhs via a clamped constant-coefficient solve.
std::vector<double> apply_L_inverse(double nbar, double tau0, std::span<const double> rhs,
                                    const Grid& g);

// Solution operator of the nonlinear eigenproblem, T0(tau) f = -L^{-1} (f'');
// the Laplacian of f is formed by second differences. Returns the pair
// (s, a (D^2+tau) s) so callers can reuse the companion field.
BvpSolution apply_T0(double nbar, double tau, std::span<const double> f, const Grid& g);

// Derivative of T0 in tau: DT0(tau) u = -L^{-1} (2/(nbar-1)) (D^2 + tau nbar) T0(tau) u.
std::vector<double> apply_DT0(double nbar, double tau, std::span<const double> u, const Grid& g);

// Adjoint eigenfunction psi = L phi / <L phi, phi> = -phi'' / ||phi'||^2.
std::vector<double> adjoint_eigenfunction(const Eigenpair& pair);

// Two independent routes to the same spectral denominator. `operator_route`
// applies DT0 and integrates; `closed_form` uses the reduction through the
// eigenrelation.
struct DenominatorReport {
    double operator_route = 0.0;
    double closed_form = 0.0;
};

// Pairing with phi itself: 1 + tau^2 <DT0 phi, phi>
//   = (nbar + 1 - 2 tau^2 nbar <L^{-1} phi, phi>) / (nbar - 1).
DenominatorReport denominator_phi_pairing(double nbar, const Eigenpair& pair, const Grid& g);

// Pairing with the adjoint eigenfunction: 1 + tau^2 <DT0 phi, psi>
//   = ((nbar+1) ||phi'||^2 - 2 tau nbar) / ((nbar-1) ||phi'||^2).
// This is the denominator of the eigenvalue correction.
DenominatorReport denominator_adjoint_pairing(double nbar, const Eigenpair& pair, const Grid& g);

// Guarded correction denominator (adjoint pairing, closed form); cross-checks
// the operator route to 1e-4 relative and rejects |value| <= 1e-8.
double denominator(double nbar, const Eigenpair& pair, const Grid& g);

// <(T0(tau0) - Teps(tau0)) phi, weight> by two clamped solves with the exact
// Laplacian of phi as data.
double numerator_direct(const PeriodicIndex& idx, double eps, const Eigenpair& pair,
                        std::span<const double> weight, const Grid& g);

enum class CorrectionMode { ThetaStar, ThetaEps };

struct CorrectionReport {
    double tau0 = 0.0;
    double tau1 = 0.0;              // first-order coefficient: tau_eps ~ tau0 + eps tau1
    double numerator_inner = 0.0;   // <theta, psi>
    double denominator = 0.0;       // 1 + tau0^2 <DT0 phi, psi>, closed form
    bool denominator_guard = true;  // |denominator| > 1e-8
    double delta = 0.0;
    double eps = 0.0;               // only meaningful for ThetaEps
    CorrectionMode mode = CorrectionMode::ThetaStar;
};

// First-order transmission-eigenvalue correction
//   tau1 = -tau0^2 <theta, psi> / (1 + tau0^2 <DT0 phi, psi>)
// with theta = theta^* (mode ThetaStar, eps-independent along cutoff delta)
// or theta = theta_eps^{(2)} (mode ThetaEps at the given eps).
CorrectionReport correction(const PeriodicIndex& idx, const Eigenpair& pair,
                            const CellFunctions& cells, double delta, const Grid& g,
                            CorrectionMode mode, double eps = 0.0);

}  // namespace tehomog
