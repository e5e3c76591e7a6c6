#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "clks/collision.hpp"
#include "clks/rng.hpp"

using namespace clks;

TEST_CASE("post-collision worked cases") {
    Vec3 u{1, 2, 3}, w{0, 0, 1};
    CollisionPair same = post_collision(u, u, w);
    CHECK(norm(same.u_prime - u) < 1e-15);
    CHECK(norm(same.v_prime - u) < 1e-15);

    // omega orthogonal to the relative velocity: nothing happens.
    Vec3 v{1, 2, 0};
    CollisionPair ortho = post_collision(u, v, {1, 0, 0});
    CHECK(norm(ortho.u_prime - u) < 1e-15);
    CHECK(norm(ortho.v_prime - v) < 1e-15);

    // Head-on exchange.
    CollisionPair head = post_collision({1, 0, 0}, {-1, 0, 0}, {1, 0, 0});
    CHECK(norm(head.u_prime - Vec3{-1, 0, 0}) < 1e-15);
    CHECK(norm(head.v_prime - Vec3{1, 0, 0}) < 1e-15);

    CHECK_THROWS_AS(post_collision(u, v, {1, 1, 0}), NonUnitOmega);
}

TEST_CASE("momentum and energy conservation on random triples") {
    RandomStream rng(5);
    for (int i = 0; i < 20000; ++i) {
        Vec3 u = rng.normal3() * 2.0, v = rng.normal3() * 2.0, w = rng.unit_sphere();
        CollisionPair p = post_collision(u, v, w);
        CHECK(norm(p.u_prime + p.v_prime - (u + v)) < 1e-12);
        CHECK(std::fabs(norm2(p.u_prime) + norm2(p.v_prime) - norm2(u) - norm2(v)) < 1e-12);
    }
}

TEST_CASE("post-collision map is invariant under omega -> -omega") {
    RandomStream rng(6);
    for (int i = 0; i < 200; ++i) {
        Vec3 u = rng.normal3(), v = rng.normal3(), w = rng.unit_sphere();
        CollisionPair a = post_collision(u, v, w), b = post_collision(u, v, -w);
        CHECK(norm(a.u_prime - b.u_prime) < 1e-15);
        CHECK(norm(a.v_prime - b.v_prime) < 1e-15);
    }
}

TEST_CASE("collision frequency: quadrature route equals the erf closed form") {
    for (double T : {0.5, 1.0, 2.0})
        for (double s : {0.0, 0.3, 1.0, 4.0, 10.0, 50.0}) {
            double q = collision_frequency(s, T);
            double c = collision_frequency_closed_form(s, T);
            CHECK(std::fabs(q - c) <= 1e-8 * c);
        }
}

TEST_CASE("collision frequency shape: nu(0), monotonicity, linear growth") {
    CHECK(collision_frequency_closed_form(0.0, 1.0) == doctest::Approx(8.0 * M_PI));
    double prev = 0;
    for (double s = 0; s <= 20.0; s += 0.5) {
        double nu = collision_frequency_closed_form(s, 1.0);
        CHECK(nu > prev);
        prev = nu;
    }
    // nu(v)/|v| plateaus at the Maxwellian mass 2 pi * sqrt(2 pi / T).
    double lim = 2.0 * M_PI * std::sqrt(2.0 * M_PI);
    for (double s : {10.0, 50.0, 100.0}) {
        double ratio = collision_frequency_closed_form(s, 1.0) / s;
        CHECK(std::fabs(ratio - lim) < lim * 3.0 / (s * s));  // 3T/v^2 correction scale
    }
    double c1 = 0, c2 = 0;
    nu_comparability(1.0, 20.0, c1, c2);
    CHECK(c1 > 0);
    CHECK(c2 < 40.0);
    CHECK(c1 <= c2);
}

TEST_CASE("nu comparability constants are stable across temperatures") {
    double c1a, c2a, c1b, c2b;
    nu_comparability(0.5, 20.0, c1a, c2a);
    nu_comparability(2.0, 20.0, c1b, c2b);
    CHECK(c1a > 0);
    CHECK(c1b > 0);
    CHECK(c2a / c1a < 4.0);
    CHECK(c2b / c1b < 4.0);
}

TEST_CASE("kernel majorant closed forms") {
    CHECK_THROWS_AS(k_rho({1, 0, 0}, {1, 0, 0}, 1.0), SingularPoint);
    for (double rho : {0.25, 1.0, 4.0}) {
        L1CheckResult res = k_rho_l1_check(rho);
        CHECK(res.pass);
        CHECK(std::fabs(res.l1 - 2.0 * M_PI / rho) <= 1e-8 * res.l1_expected);
        CHECK(std::fabs(res.l1_over_r - 2.0 * std::pow(M_PI, 1.5) / std::sqrt(rho)) <=
              1e-8 * res.l1_over_r_expected);
    }
    double c = k_theta_fitted_constant(1.0, 0.5, 1.0, 4.0);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
}

TEST_CASE("gain term: zero second argument and equilibrium annihilation") {
    RandomStream rng(7);
    auto zero = [](const Vec3&) { return 0.0; };
    auto mu0 = [](const Vec3& v) {
        return std::exp(-norm2(v) / 2.0) / (2.0 * M_PI);
    };
    QGainResult rz = q_gain_mc(mu0, zero, {1, 0, 0}, 1.0, 2000, rng);
    CHECK(rz.gain.estimate == doctest::Approx(0.0));
    CHECK(rz.loss.estimate == doctest::Approx(0.0));

    for (double speed : {0.0, 2.0, 5.0}) {
        Vec3 v{speed, 0, 0};
        QGainResult r = q_gain_mc(mu0, mu0, v, 1.0, 300000, rng);
        double q = r.gain.estimate - r.loss.estimate;
        double se = std::sqrt(r.gain.std_error * r.gain.std_error +
                              r.loss.std_error * r.loss.std_error);
        CHECK(std::fabs(q) <= 3.0 * se);
    }
}

TEST_CASE("gamma form rescales by the square-root Maxwellian") {
    RandomStream rng(8);
    auto one = [](const Vec3&) { return 1.0; };
    Vec3 v{1.0, 0.5, 0.0};
    QGainResult plain = q_gain_mc(one, one, v, 1.0, 50000, rng);
    RandomStream rng2(8);
    QGainResult gamma = gamma_form_mc(one, one, v, 1.0, 1.0, 50000, rng2);
    // f = 1: Gamma_gain = mu^{-1/2} Q_gain(sqrt(mu), sqrt(mu)); both finite, and
    // loss differs exactly by the mu^{1/2}(u') mu^{1/2}(v') vs 1 weights.
    CHECK(std::isfinite(gamma.gain.estimate));
    CHECK(gamma.gain.estimate < plain.gain.estimate);
    CHECK(gamma.gain.estimate > 0.0);
}
