#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "clks/rng.hpp"
#include "clks/stats.hpp"

using namespace clks;

TEST_CASE("streams replay exactly for the same address") {
    RandomStream a(42, 3, 7), b(42, 3, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u32() == b.next_u32());
}

TEST_CASE("distinct workers and streams decorrelate") {
    RandomStream a(42, 0, 0), b(42, 1, 0), c(42, 0, 1), d(43, 0, 0);
    int same_ab = 0, same_ac = 0, same_ad = 0;
    for (int i = 0; i < 4096; ++i) {
        std::uint32_t x = a.next_u32();
        same_ab += x == b.next_u32();
        same_ac += x == c.next_u32();
        same_ad += x == d.next_u32();
    }
    CHECK(same_ab < 4);
    CHECK(same_ac < 4);
    CHECK(same_ad < 4);
}

TEST_CASE("uniform stays strictly inside (0,1) with the right mean") {
    RandomStream r(7);
    MomentAccumulator acc;
    for (int i = 0; i < 200000; ++i) {
        double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        acc.add(u);
    }
    CHECK(std::fabs(acc.mean() - 0.5) < 4.0 * acc.std_error());
    CHECK(std::fabs(acc.variance() - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("normal moments") {
    RandomStream r(1);
    MomentAccumulator acc;
    for (int i = 0; i < 200000; ++i) acc.add(r.normal());
    CHECK(std::fabs(acc.mean()) < 4.0 * acc.std_error());
    CHECK(std::fabs(acc.variance() - 1.0) < 2e-2);
    CHECK(std::fabs(acc.excess_kurtosis()) < 0.1);
}

TEST_CASE("unit sphere points have unit norm and vanishing mean") {
    RandomStream r(5);
    Vec3 mean{};
    for (int i = 0; i < 50000; ++i) {
        Vec3 w = r.unit_sphere();
        REQUIRE(std::fabs(norm(w) - 1.0) < 1e-12);
        mean += w;
    }
    CHECK(norm(mean) / 50000.0 < 0.02);
}
