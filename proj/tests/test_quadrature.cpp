#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "clks/quadrature.hpp"

using namespace clks;

TEST_CASE("single panel integrates low-degree polynomials exactly") {
    for (int k = 0; k <= 10; ++k) {
        QuadResult q = gk15_panel([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
        CHECK(q.value == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
    }
}

TEST_CASE("single panel on e^x") {
    QuadResult q = gk15_panel([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(std::fabs(q.value - (std::exp(1.0) - 1.0)) < 1e-13);
}

TEST_CASE("adaptive Gaussian over a wide interval") {
    QuadResult q = integrate([](double x) { return std::exp(-x * x); }, -12.0, 12.0, 1e-12);
    CHECK(std::fabs(q.value - std::sqrt(M_PI)) < 1e-11);
    CHECK(std::fabs(q.value - std::sqrt(M_PI)) < 10 * q.error + 1e-13);
}

TEST_CASE("adaptive resolves a narrow spike") {
    double s = 1e-3;
    QuadResult q = integrate(
        [s](double x) { return std::exp(-(x - 0.3) * (x - 0.3) / (2 * s * s)); }, 0.0, 1.0,
        1e-13);
    CHECK(std::fabs(q.value - s * std::sqrt(2.0 * M_PI)) < 1e-12);
}

TEST_CASE("2d tensor integral of a separable Gaussian") {
    QuadResult q = integrate2d(
        [](double x, double y) { return std::exp(-x * x - y * y); }, -8, 8, -8, 8, 1e-11);
    CHECK(std::fabs(q.value - M_PI) < 1e-9);
}

TEST_CASE("integrate_tail adds the analytic remainder to the error") {
    QuadResult q = integrate_tail([](double x) { return std::exp(-x); }, 0.0, 30.0,
                                  std::exp(-30.0));
    CHECK(std::fabs(q.value - 1.0) < 1e-10);
    CHECK(q.error >= std::exp(-30.0));
}

TEST_CASE("gauss_legendre nodes integrate high-degree monomials") {
    const int n = 16;
    double xs[n], ws[n];
    gauss_legendre(n, xs, ws);
    double wsum = 0;
    for (double w : ws) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // Exact through degree 2n-1 = 31.
    double s30 = 0, s31 = 0;
    for (int i = 0; i < n; ++i) {
        s30 += ws[i] * std::pow(xs[i], 30);
        s31 += ws[i] * std::pow(xs[i], 31);
    }
    CHECK(s30 == doctest::Approx(2.0 / 31.0).epsilon(1e-12));
    CHECK(std::fabs(s31) < 1e-14);
}
