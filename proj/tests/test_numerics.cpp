#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tehomog/numerics.hpp"

using namespace tehomog;

namespace {

constexpr double pi = std::numbers::pi;

// dense Gaussian elimination with partial pivoting, test-side oracle
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (int i = k + 1; i < n; ++i) {
            const double l = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= l * a[k][j];
            b[i] -= l * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= a[i][j] * b[j];
        b[i] /= a[i][i];
    }
    return b;
}

BandMatrix random_dominant_band(int n, int kl, int ku, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    BandMatrix a(n, kl, ku);
    for (int i = 0; i < n; ++i) {
        double offdiag = 0.0;
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
            if (j == i) continue;
            a.at(i, j) = unif(rng);
            offdiag += std::abs(a.get(i, j));
        }
        a.at(i, i) = offdiag + 1.0 + std::abs(unif(rng));
    }
    return a;
}

}  // namespace

TEST_CASE("grid abscissae") {
    Grid g(101);
    CHECK(g.x(0) == 0.0);
    CHECK(g.x(100) == 1.0);  // exact in floating point
    CHECK(g.h() == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_THROWS_AS(Grid(5), std::invalid_argument);
}

TEST_CASE("integrate: constants, polynomials, smooth functions") {
    Grid g(101);
    CHECK(integrate(std::vector<double>(101, 1.0), g) == doctest::Approx(1.0).epsilon(1e-14));

    auto x2 = g.sample([](double x) { return x * x; });
    CHECK(std::abs(integrate(x2, g) - 1.0 / 3.0) < 1e-10);

    Grid g201(201);
    auto s = g201.sample([](double x) { return std::sin(pi * x); });
    // reference value from high-resolution quadrature
    Grid gref(20001);
    auto sref = gref.sample([](double x) { return std::sin(pi * x); });
    const double ref = integrate(sref, gref);
    CHECK(std::abs(ref - 2.0 / pi) < 1e-12);
    CHECK(std::abs(integrate(s, g201) - 2.0 / pi) < 1e-8);

    // trapezoid fallback when the interval count is odd
    Grid g10(10);
    CHECK(integrate(std::vector<double>(10, 2.5), g10) == doctest::Approx(2.5).epsilon(1e-14));

    CHECK_THROWS_AS(integrate(std::vector<double>(5, 0.0), g), std::invalid_argument);
}

TEST_CASE("integrate is linear and positive") {
    Grid g(65);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    std::vector<double> f(65), w(65);
    for (int j = 0; j < 65; ++j) {
        f[j] = unif(rng);
        w[j] = unif(rng) - 1.0;
    }
    CHECK(integrate(f, g) >= 0.0);
    std::vector<double> combo(65);
    for (int j = 0; j < 65; ++j) combo[j] = 2.0 * f[j] - 3.0 * w[j];
    CHECK(integrate(combo, g) ==
          doctest::Approx(2.0 * integrate(f, g) - 3.0 * integrate(w, g)).epsilon(1e-12));
}

TEST_CASE("discrete norms") {
    Grid g(401);
    Norms z = discrete_norms(std::vector<double>(401, 0.0), g);
    CHECK(z.l2 == 0.0);
    CHECK(z.h2 == 0.0);

    auto s = g.sample([](double x) { return std::sin(pi * x); });
    Norms n = discrete_norms(s, g);
    CHECK(std::abs(n.l2 - std::sqrt(0.5)) < 1e-6);
    CHECK(std::abs(n.h2 - pi * pi * std::sqrt(0.5)) < 1e-3);

    auto q = g.sample([](double x) { return x * (1.0 - x); });
    CHECK(std::abs(discrete_norms(q, g).h2 - 2.0) < 1e-6);
}

TEST_CASE("solve_banded: identity, tridiagonal residual, dense oracle") {
    BandMatrix eye(6, 0, 0);
    for (int i = 0; i < 6; ++i) eye.at(i, i) = 1.0;
    std::vector<double> b{1, -2, 3, -4, 5, -6};
    CHECK(solve_banded(eye, b) == b);

    BandMatrix lap(3, 1, 1);
    for (int i = 0; i < 3; ++i) {
        lap.at(i, i) = 2.0;
        if (i > 0) lap.at(i, i - 1) = -1.0;
        if (i < 2) lap.at(i, i + 1) = -1.0;
    }
    std::vector<double> rhs{1, 1, 1};
    auto x = solve_banded(lap, rhs);
    auto back = lap.multiply(x);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(back[i] - rhs[i]) < 1e-12);

    const int n = 50, kl = 3, ku = 2;
    BandMatrix a = random_dominant_band(n, kl, ku, 12345);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> r(n);
    for (auto& v : r) v = unif(rng);
    auto xb = solve_banded(a, r);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
            dense[i][j] = a.get(i, j);
    auto xd = dense_solve(dense, r);
    for (int i = 0; i < n; ++i) CHECK(std::abs(xb[i] - xd[i]) < 1e-10);
}

TEST_CASE("solve_banded round trip on large random systems") {
    for (int n : {10, 100, 1000, 10000}) {
        BandMatrix a = random_dominant_band(n, 4, 4, 1000 + n);
        std::mt19937 rng(n);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::vector<double> x_true(n);
        for (auto& v : x_true) v = unif(rng);
        const auto b = a.multiply(x_true);
        const auto x = solve_banded(a, b);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num = std::max(num, std::abs(x[i] - x_true[i]));
            den = std::max(den, std::abs(x_true[i]));
        }
        CHECK(num <= 1e-9 * den);
    }
}

TEST_CASE("solve_banded flags singular systems with the pivot index") {
    BandMatrix a(4, 1, 1);
    a.at(0, 0) = 1.0;
    a.at(1, 1) = 1.0;
    a.at(3, 3) = 1.0;  // row/column 2 left without a usable pivot
    std::vector<double> b{1, 1, 1, 1};
    CHECK_THROWS_AS(solve_banded(a, b), SingularMatrixError);
    try {
        solve_banded(a, b);
    } catch (const SingularMatrixError& e) {
        CHECK(e.pivot_index == 2);
    }
}

TEST_CASE("find_root") {
    CHECK(std::abs(find_root([](double x) { return x - 0.5; }, 0.0, 1.0, 1e-12) - 0.5) < 1e-12);
    CHECK(std::abs(find_root([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-12) - pi / 2) <
          1e-11);
    CHECK_THROWS_AS(find_root([](double x) { return 1.0 + x * x; }, 0.0, 1.0, 1e-12),
                    BracketError);

    // result stays inside the initial bracket
    const double r = find_root([](double x) { return std::sin(5.0 * x) - 0.3; }, 0.0, 0.3, 1e-13);
    CHECK(r >= 0.0);
    CHECK(r <= 0.3);
}

TEST_CASE("fit_rate") {
    RateStudy s1 = fit_rate({{1.0 / 8, 1.0 / 8}, {1.0 / 16, 1.0 / 16}, {1.0 / 32, 1.0 / 32}});
    CHECK(std::abs(s1.slope - 1.0) < 1e-12);
    CHECK(s1.r2 == doctest::Approx(1.0));

    RateStudy s2 = fit_rate({{1.0 / 8, 3.0 / 64}, {1.0 / 16, 3.0 / 256}, {1.0 / 32, 3.0 / 1024}});
    CHECK(std::abs(s2.slope - 2.0) < 1e-12);

    std::vector<RateSample> perturbed;
    for (double eps : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64})
        perturbed.push_back({eps, std::pow(eps, 1.5) * (1.0 + 0.01 * std::sin(1.0 / eps))});
    RateStudy s3 = fit_rate(perturbed);
    CHECK(s3.slope > 1.4);
    CHECK(s3.slope < 1.6);

    RateStudy dg = fit_rate({{0.5, 1.0}, {0.25, 0.0}, {0.125, 1.0}});
    CHECK(dg.degenerate);
    CHECK(std::isinf(dg.slope));

    CHECK_THROWS_AS(fit_rate({{0.5, 1.0}, {0.25, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({{0.5, 1.0}, {0.5, 1.0}, {0.25, 1.0}}), std::invalid_argument);

    // exact power data over a wider sweep
    std::vector<RateSample> cubic;
    for (int k = 2; k < 9; ++k) cubic.push_back({std::pow(2.0, -k), std::pow(2.0, -3 * k)});
    CHECK(std::abs(fit_rate(cubic).slope - 3.0) < 1e-10);
}

TEST_CASE("torus interpolation reproduces smooth periodic data") {
    Grid g(257);
    auto f = g.sample([](double y) { return std::sin(2 * pi * y) + 0.3 * std::cos(4 * pi * y); });
    for (double y : {0.013, 0.35, 0.718, 0.999, -0.2, 1.45}) {
        const double exact = std::sin(2 * pi * y) + 0.3 * std::cos(4 * pi * y);
        CHECK(std::abs(torus_interpolate(f, y) - exact) < 1e-5);
    }
}
