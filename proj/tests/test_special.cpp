#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "clks/special.hpp"

using namespace clks;

TEST_CASE("i0 at zero and one") {
    CHECK(i0(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // Frozen from the adaptive quadrature of the defining integral.
    CHECK(std::fabs(i0(1.0) - 1.2660658777520084) < 1e-9);
}

TEST_CASE("i0 is even and at least one") {
    for (double y : {0.3, 1.7, 8.0, 25.0}) {
        CHECK(i0(y) == doctest::Approx(i0(-y)).epsilon(1e-14));
        CHECK(i0(y) >= 1.0);
    }
}

TEST_CASE("scaled form agrees with the quadrature reference across regimes") {
    for (double y : {1e-3, 0.5, 5.0, 29.9, 30.1, 100.0, 1000.0, 10000.0}) {
        double ref = i0_scaled_ref(y);
        CHECK(std::fabs(i0_scaled(y) - ref) < 1e-10 * ref);
    }
}

TEST_CASE("frozen value at y = 50") {
    CHECK(std::fabs(i0_scaled(50.0) - 0.056561626647454) < 1e-12);
}

TEST_CASE("large-argument behavior follows 1/sqrt(2 pi y)") {
    for (double y : {1e3, 1e4}) {
        double lead = 1.0 / std::sqrt(2.0 * M_PI * y);
        CHECK(i0_scaled(y) == doctest::Approx(lead * (1.0 + 1.0 / (8.0 * y))).epsilon(1e-5));
    }
}

TEST_CASE("log form stays finite where the raw one overflows") {
    CHECK(std::isinf(i0(800.0)));
    double l = log_i0(800.0);
    CHECK(std::isfinite(l));
    CHECK(std::fabs(std::exp(log_i0(5.0)) - i0(5.0)) < 1e-12 * i0(5.0));
    // log I0(y) ~ y - log sqrt(2 pi y) for large y.
    CHECK(l == doctest::Approx(800.0 - 0.5 * std::log(2.0 * M_PI * 800.0)).epsilon(1e-4));
}

TEST_CASE("scaled form is decreasing in |y|") {
    double prev = i0_scaled(0.0);
    for (double y = 0.5; y <= 64.0; y *= 2.0) {
        double cur = i0_scaled(y);
        CHECK(cur < prev);
        prev = cur;
    }
}
