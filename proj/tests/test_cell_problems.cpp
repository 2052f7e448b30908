#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tehomog/cell_problems.hpp"

using namespace tehomog;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

PeriodicIndex pc24() { return PeriodicIndex::piecewise({0.0, 0.5}, {2.0, 4.0}); }

// beta for the {2,4} half-half profile, by piecewise integration:
// beta'' = n - 3 = -1 on [0,1/2), +1 on [1/2,1); beta'(0) = 1/4 from the
// zero-mean constraint, beta(0) = 0.
double beta24(double y) {
    y -= std::floor(y);
    if (y < 0.5) return y / 4.0 - y * y / 2.0;
    return y * y / 2.0 - 0.75 * y + 0.25;
}

double beta24_prime(double y) {
    y -= std::floor(y);
    return y < 0.5 ? 0.25 - y : y - 0.75;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// interior 3-point second difference on the torus (seam duplicated)
std::vector<double> torus_d2(std::span<const double> u, const Grid& g) {
    const int m = g.m();
    const double ih2 = 1.0 / (g.h() * g.h());
    std::vector<double> d(m);
    for (int j = 0; j < m; ++j) {
        const int jm = (j == 0) ? m - 2 : j - 1;
        const int jp = (j == m - 1) ? 1 : j + 1;
        d[j] = (u[jm] - 2.0 * u[j] + u[jp]) * ih2;
    }
    return d;
}

}  // namespace

TEST_CASE("periodic Poisson: zero, Fourier mode, alternating sign") {
    Grid g(2001);
    auto zero = solve_periodic_poisson(std::vector<double>(2001, 0.0), g);
    for (double v : zero) CHECK(std::abs(v) < 1e-14);

    auto rhs = g.sample([](double y) { return std::cos(two_pi * y); });
    auto u = solve_periodic_poisson(rhs, g);
    auto exact = g.sample([](double y) { return std::cos(two_pi * y) / (two_pi * two_pi); });
    CHECK(max_abs_diff(u, exact) < 1e-8);

    // -u'' = +1 on [0,1/2), -1 on [1/2,1): same equation as beta for the
    // {2,4} profile, so u = beta24. Jump nodes carry the one-sided mean.
    auto rhs2 = g.sample([](double y) { return y < 0.5 ? 1.0 : -1.0; });
    rhs2[0] = rhs2[1000] = rhs2[2000] = 0.0;
    auto u2 = solve_periodic_poisson(rhs2, g);
    auto exact2 = g.sample(beta24);
    CHECK(max_abs_diff(u2, exact2) < 1e-7);

    auto bad = g.sample([](double) { return 1.0; });
    CHECK_THROWS_AS(solve_periodic_poisson(bad, g), ConsistencyError);
}

TEST_CASE("solve_beta") {
    Grid g(2001);
    PeriodicIndex c3 = PeriodicIndex::piecewise({0.0}, {3.0});
    for (double v : solve_beta(c3, g)) CHECK(std::abs(v) < 1e-14);

    PeriodicIndex trig = PeriodicIndex::trigonometric(3.0, {1.0}, {});
    auto beta = solve_beta(trig, g);
    auto exact = g.sample([](double y) { return -std::cos(two_pi * y) / (two_pi * two_pi); });
    CHECK(max_abs_diff(beta, exact) < 1e-8);

    // piecewise: grid-sample path against the closed form
    auto b24 = solve_beta(pc24(), g);
    auto b24_exact = g.sample(beta24);
    CHECK(max_abs_diff(b24, b24_exact) < 1e-6);
}

TEST_CASE("solve_chi and the beta/(nbar-1) identity") {
    Grid g(2001);
    PeriodicIndex trig = PeriodicIndex::trigonometric(3.0, {1.0}, {});
    auto chi = solve_chi(trig, g);
    auto exact = g.sample([](double y) { return -std::cos(two_pi * y) / (8.0 * pi * pi); });
    CHECK(max_abs_diff(chi, exact) < 1e-8);

    auto beta = solve_beta(trig, g);
    for (int j = 0; j < g.m(); ++j) CHECK(std::abs(chi[j] * 2.0 - beta[j]) < 1e-9);
}

TEST_CASE("solve_gamma, solve_alpha, solve_B against the Fourier oracle") {
    Grid g(2001);
    // chi = -cos(2 pi y)/(8 pi^2):
    //   gamma solves -gamma'' = 2 chi'  => gamma = sin(2 pi y)/(8 pi^3)
    //   alpha solves -alpha'' = chi     => alpha = -cos(2 pi y)/(32 pi^4)
    //   B     solves -B'' = 2 gamma'    => B = cos(2 pi y)/(8 pi^4)
    auto chi = g.sample([](double y) { return -std::cos(two_pi * y) / (8.0 * pi * pi); });
    auto gamma = solve_gamma(chi, g);  // O(h^2): rhs 2 chi' comes from differencing
    auto gamma_exact = g.sample([](double y) { return std::sin(two_pi * y) / (8.0 * pi * pi * pi); });
    CHECK(max_abs_diff(gamma, gamma_exact) < 1e-7);

    auto alpha = solve_alpha(chi, g);
    auto alpha_exact =
        g.sample([](double y) { return -std::cos(two_pi * y) / (32.0 * pi * pi * pi * pi); });
    CHECK(max_abs_diff(alpha, alpha_exact) < 1e-10);

    auto bmat = solve_B(gamma, g);
    auto b_exact =
        g.sample([](double y) { return std::cos(two_pi * y) / (8.0 * pi * pi * pi * pi); });
    CHECK(max_abs_diff(bmat, b_exact) < 1e-7);

    for (double v : solve_gamma(std::vector<double>(g.m(), 0.0), g)) CHECK(std::abs(v) < 1e-14);

    // the trigonometric cell path carries the same modes exactly
    CellFunctions cells(PeriodicIndex::trigonometric(3.0, {1.0}, {}), g);
    for (double y : {0.0, 0.2, 0.45, 0.8}) {
        CHECK(cells.eval(CellField::Gamma, y) ==
              doctest::Approx(std::sin(two_pi * y) / (8.0 * pi * pi * pi)).epsilon(1e-12));
        CHECK(cells.eval(CellField::Alpha, y) ==
              doctest::Approx(-std::cos(two_pi * y) / (32.0 * pi * pi * pi * pi)).epsilon(1e-12));
        CHECK(cells.eval(CellField::Bmat, y) ==
              doctest::Approx(std::cos(two_pi * y) / (8.0 * pi * pi * pi * pi)).epsilon(1e-12));
    }
}

TEST_CASE("generic solvers satisfy the discrete equations") {
    std::vector<double> samples(257);
    for (int j = 0; j < 257; ++j) {
        const double y = static_cast<double>(j) / 256.0;
        samples[j] = 2.5 + 0.5 * std::sin(two_pi * y) + 0.2 * std::cos(4.0 * pi * y);
    }
    PeriodicIndex idx = PeriodicIndex::sampled(samples);
    // residual of -alpha'' = chi and of -B'' = 2 gamma' shrink at second order
    auto res_of = [&](const Grid& gr) {
        auto c = solve_chi(idx, gr);
        auto al = solve_alpha(c, gr);
        auto d2 = torus_d2(al, gr);
        double r = 0.0;
        for (int j = 0; j < gr.m(); ++j) r = std::max(r, std::abs(d2[j] + c[j]));
        auto gam = solve_gamma(c, gr);
        auto bm = solve_B(gam, gr);
        auto d2b = torus_d2(bm, gr);
        std::vector<double> gp(gr.m());
        {
            const double h = gr.h();
            for (int j = 0; j < gr.m(); ++j) {
                const int jm = (j == 0) ? gr.m() - 2 : j - 1;
                const int jp = (j == gr.m() - 1) ? 1 : j + 1;
                gp[j] = (gam[jp] - gam[jm]) / (2.0 * h);
            }
        }
        for (int j = 0; j < gr.m(); ++j) r = std::max(r, std::abs(d2b[j] + 2.0 * gp[j]));
        return r;
    };
    const double r1 = res_of(Grid(513));
    const double r2 = res_of(Grid(1025));
    CHECK(r2 < r1 / 3.5);
}

TEST_CASE("piecewise gamma: exact path against the generic Poisson path") {
    Grid g(2001);
    CellFunctions cells(pc24(), g);
    auto chi = solve_chi(pc24(), g);
    auto gamma_generic = solve_gamma(chi, g);
    CHECK(max_abs_diff(cells.value(CellField::Gamma), gamma_generic) < 1e-6);
}

TEST_CASE("cell hierarchy: exact piecewise path") {
    Grid g(513);
    CellFunctions cells(pc24(), g);
    CHECK(cells.eval_derivative(CellField::Beta, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(cells.eval_derivative(CellField::Beta, 0.25) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(cells.eval_derivative(CellField::Beta, 0.5) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(cells.eval_derivative(CellField::Chi, 0.0) == doctest::Approx(0.125).epsilon(1e-14));
    for (double y : {0.0, 0.2, 0.5, 0.77}) {
        CHECK(cells.eval(CellField::Beta, y) == doctest::Approx(beta24(y)).epsilon(1e-13));
        CHECK(cells.eval(CellField::Chi, y) == doctest::Approx(beta24(y) / 2.0).epsilon(1e-13));
    }
}

TEST_CASE("cell hierarchy invariants across profile kinds") {
    Grid g(1025);
    std::vector<double> samples(513);
    for (int j = 0; j < 513; ++j) {
        const double y = static_cast<double>(j) / 512.0;
        samples[j] = 3.0 + 0.8 * std::cos(two_pi * y);
    }
    const PeriodicIndex profiles[] = {pc24(), PeriodicIndex::trigonometric(3.0, {0.8}, {0.3}),
                                      PeriodicIndex::sampled(samples)};
    for (const auto& idx : profiles) {
        CellFunctions cells(idx, g);
        const double nbar = idx.cell_average();
        for (CellField f : {CellField::Beta, CellField::Chi, CellField::Gamma, CellField::Alpha,
                            CellField::Bmat}) {
            const auto& val = cells.value(f);
            CHECK(std::abs(integrate(val, g)) < 1e-10);                       // mean zero
            CHECK(std::abs(val.front() - val.back()) < 10.0 * g.h() * g.h()); // periodic seam
            const auto& der = cells.derivative(f);
            CHECK(std::abs(der.front() - der.back()) < 10.0 * g.h() * g.h());
        }
        const auto& beta = cells.value(CellField::Beta);
        const auto& chi = cells.value(CellField::Chi);
        for (int j = 0; j < g.m(); ++j)
            CHECK(std::abs(chi[j] * (nbar - 1.0) - beta[j]) < 1e-9);
    }
}

TEST_CASE("constant profile: the whole hierarchy vanishes") {
    Grid g(257);
    CellFunctions cells(PeriodicIndex::piecewise({0.0}, {2.0}), g);
    for (CellField f : {CellField::Beta, CellField::Chi, CellField::Gamma, CellField::Alpha,
                        CellField::Bmat})
        for (double v : cells.value(f)) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("trig profile: Fourier path equals generic sampled path") {
    PeriodicIndex trig = PeriodicIndex::trigonometric(3.0, {0.6}, {0.4});
    Grid g(2049);
    CellFunctions exact(trig, g);
    std::vector<double> samples = g.sample([&](double y) { return trig.value(y); });
    CellFunctions generic(PeriodicIndex::sampled(samples), g);
    for (CellField f : {CellField::Beta, CellField::Chi, CellField::Gamma, CellField::Alpha,
                        CellField::Bmat})
        CHECK(max_abs_diff(exact.value(f), generic.value(f)) < 1e-7);
}
