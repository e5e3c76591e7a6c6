// Acceptance suite: one criterion per function, each printing a single
// [PASS]/[FAIL] line with the measured numbers. Run with no arguments for the
// whole suite or with criterion names to select. Exit code = failure count.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "clks/clkernel.hpp"
#include "clks/collision.hpp"
#include "clks/cycles.hpp"
#include "clks/geometry.hpp"
#include "clks/lemma.hpp"
#include "clks/quadrature.hpp"
#include "clks/rng.hpp"
#include "clks/simulator.hpp"
#include "clks/stats.hpp"
#include "cycle_oracle.hpp"

using namespace clks;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

struct Timer {
    double start = now_seconds();
    double elapsed() const { return now_seconds() - start; }
};

bool report(const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    return pass;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const Vec3 kN{0, 0, 1};
const Vec3 kX{0, 0, 0};

Vec3 random_incoming(RandomStream& rng, double cap = 8.0) {
    for (;;) {
        Vec3 u{1.5 * rng.normal(), 1.5 * rng.normal(), rng.uniform(0.05, 3.0)};
        if (norm(u) <= cap) return u;
    }
}

// --- criterion 1: kernel normalization -------------------------------------

bool crit_kernel_normalization() {
    Timer timer;
    RandomStream rng(2024, 0, 1);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        double T = rng.uniform(0.5, 2.0);
        double rp = rng.uniform(0.02, 1.0);
        double rl = rng.uniform(0.02, 1.98);
        WallModel wall = WallModel::make(TemperatureField::constant(T), rp, rl);
        Vec3 u = random_incoming(rng);
        // The quadrature budget sits two decades under the 1e-4 criterion.
        NormalizationResult q = normalization_quadrature(wall, kX, kN, u, 1e-6);
        worst = std::max(worst, std::fabs(q.value - 1.0));
    }
    double secs = timer.elapsed();
    bool pass = worst <= 1e-4 && secs < 30.0;
    return report("kernel_normalization",
                  pass, fmt("max |quad R - 1| = %.3g over 20 random walls (tol 1e-4), %.1f s (cap 30 s)",
                            worst, secs));
}

// --- criterion 2: reciprocity ----------------------------------------------

bool crit_reciprocity() {
    RandomStream rng(7, 0, 2);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        double T = rng.uniform(0.5, 2.0);
        WallModel wall = WallModel::make(TemperatureField::constant(T),
                                         rng.uniform(0.02, 1.0), rng.uniform(0.02, 1.98));
        Vec3 u = random_incoming(rng), v = -random_incoming(rng);
        worst = std::max(worst, std::fabs(reciprocity_residual(wall, kX, kN, u, v)));
    }
    bool pass = worst < 1e-10;
    return report("reciprocity", pass,
                  fmt("max |log residual| = %.3g over 1000 pairs (tol 1e-10)", worst));
}

// --- criterion 3: sampler correctness --------------------------------------

bool crit_sampler() {
    RandomStream rng(11, 0, 3);
    const long n = 1000000;
    bool pass = true;
    std::string detail;

    {
        double T = 1.4, rp = 0.55, rl = 0.75;
        WallModel wall = WallModel::make(TemperatureField::constant(T), rp, rl);
        Vec3 u{0.8, -0.5, 1.3};
        VelocityDecomposition du = decompose(u, kN);
        RiceCdf cdf(std::sqrt(1 - rp) * du.v_perp, T * rp);
        std::vector<double> s(n);
        MomentAccumulator mx, my;
        for (long i = 0; i < n; ++i) {
            Vec3 v = sample_outgoing(wall, kX, kN, u, rng);
            s[i] = -dot(v, kN);
            mx.add(v.x);
            my.add(v.y);
        }
        std::sort(s.begin(), s.end());
        std::vector<double> c(n);
        for (long i = 0; i < n; ++i) c[i] = cdf(s[i]);
        double ks = ks_statistic(c);
        double z1 = std::fabs(mx.mean() - (1 - rl) * u.x) / mx.std_error();
        double z2 = std::fabs(my.mean() - (1 - rl) * u.y) / my.std_error();
        pass = pass && ks < 0.01 && z1 <= 3.0 && z2 <= 3.0;
        detail += fmt("KS(|v_perp|, Rice) = %.5f at 1e6 (tol 0.01); tangential-mean z = %.2f/%.2f (cap 3)",
                      ks, z1, z2);
    }
    {
        // Diffuse limit: Rayleigh normal flux and centered tangential Gaussian.
        double T = 1.1;
        WallModel wall = WallModel::make(TemperatureField::constant(T), 1.0, 1.0);
        Vec3 u{2.0, -1.0, 0.7};
        std::vector<double> s(n), tx(n);
        for (long i = 0; i < n; ++i) {
            Vec3 v = sample_outgoing(wall, kX, kN, u, rng);
            s[i] = -dot(v, kN);
            tx[i] = v.x;
        }
        std::sort(s.begin(), s.end());
        std::vector<double> c(n);
        for (long i = 0; i < n; ++i) c[i] = 1.0 - std::exp(-s[i] * s[i] / (2 * T));
        double ks1 = ks_statistic(c);
        std::sort(tx.begin(), tx.end());
        for (long i = 0; i < n; ++i) c[i] = normal_cdf(tx[i] / std::sqrt(T));
        double ks2 = ks_statistic(c);
        pass = pass && ks1 < 0.01 && ks2 < 0.01;
        detail += fmt("; diffuse law KS = %.5f/%.5f", ks1, ks2);
    }
    return report("sampler", pass, detail);
}

// --- criteria 4, 5: Gaussian x I0 identities ---------------------------------

bool crit_gaussian_identity() {
    double worst_rel = 0, worst_tail = 0;
    bool pass = true;
    for (int ib = 0; ib < 5; ++ib)
        for (int ia = 0; ia < 5; ++ia)
            for (int ie = 0; ie < 5; ++ie) {
                double b = 0.5 * std::pow(1.8, ib);
                double a = b * (0.45 * ia / 4.0);
                double eps = b * (0.02 + 0.10 * ie / 4.0);
                double w[2] = {1.0, 0.6};
                LemmaReport r = lemma_abc_check(a, b, eps, w);
                worst_rel = std::max(worst_rel, std::fabs(r.lhs - r.rhs) / r.rhs);
                pass = pass && std::fabs(r.lhs - r.rhs) <= 1e-8 * r.rhs;
                for (double delta : {0.1, 0.2}) {
                    auto tails = lemma_abc_tail_check(a, b, eps, w, delta);
                    // relative margin; the bound rule carries an exp-rounding slack
                    worst_tail = std::min(worst_tail,
                                          (tails[0].margin + tails[0].quad_error) /
                                              std::max(tails[0].rhs, 1e-300));
                    pass = pass && tails[0].pass;
                    if (tails[1].asserted) pass = pass && tails[1].pass;
                }
            }
    return report("gaussian_identity", pass,
                  fmt("identity worst rel err = %.3g over 5^3 grid (tol 1e-8); tail worst rel margin = %.3g",
                      worst_rel, worst_tail));
}

bool crit_radial_identity() {
    double worst_rel = 0, worst_tail = 0, worst_literal = 0;
    bool pass = true;
    for (int ib = 0; ib < 5; ++ib)
        for (int ia = 0; ia < 5; ++ia)
            for (int ie = 0; ie < 5; ++ie) {
                double b = 0.5 * std::pow(1.8, ib);
                double a = b * (0.45 * ia / 4.0);
                double eps = b * (0.02 + 0.10 * ie / 4.0);
                double w = 0.3 + 0.5 * ia;
                LemmaReport r = lemma_perp_check(a, b, eps, w, true);
                worst_rel = std::max(worst_rel, std::fabs(r.lhs - r.rhs) / r.rhs);
                pass = pass && std::fabs(r.lhs - r.rhs) <= 1e-8 * r.rhs;
                for (double delta : {0.1, 0.2}) {
                    auto tails = lemma_perp_tail_check(a, b, eps, w, delta);
                    worst_tail = std::min(worst_tail,
                                          (tails[0].margin + tails[0].quad_error) /
                                              std::max(tails[0].rhs, 1e-300));
                    pass = pass && tails[0].pass;
                    if (tails[1].asserted) pass = pass && tails[1].pass;
                }
                // Literal unweighted form: reported, not asserted.
                LemmaReport lit = lemma_perp_check(a, b, eps, w, false);
                worst_literal = std::max(worst_literal, lit.lhs / lit.rhs);
            }
    return report("radial_identity", pass,
                  fmt("weighted identity worst rel err = %.3g (tol 1e-8); tail worst rel margin = %.3g; literal unweighted form reaches %.3f x bound (reported only, known gap)",
                      worst_rel, worst_tail, worst_literal));
}

// --- criterion 6: extra-term bound ------------------------------------------

bool crit_extra_term() {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(20.0 * i / 100.0);
    bool pass = true;
    double worst = 1e300;
    for (int it = 0; it <= 8; ++it) {
        double t = 1e-4 * std::pow(10.0, 2.0 * it / 8.0);  // [1e-4, 1e-2]
        for (double lam : {1.0, 2.0}) {
            ExtraTermReport rep = extra_term_check(t, 1.0 / 15.0, lam, grid);
            pass = pass && rep.pass_first;
            worst = std::min(worst, rep.worst_log_margin);
        }
    }
    return report("extra_term", pass,
                  fmt("polynomial bound pointwise on t in [1e-4,1e-2] x |v|<=20 x lambda in {1,2}, c=1/15; worst log margin = %.3g (>= 0)",
                      worst));
}

// --- criterion 7: recursion and exponent negativity -------------------------

std::vector<WallModel> recursion_wall_set() {
    return {
        WallModel::make(TemperatureField::constant(1.0), 1.0, 1.0),
        WallModel::make(TemperatureField::constant(0.5), 0.5, 0.5),
        WallModel::make(TemperatureField::patchwise(2, 2.0, 1.5), 0.8, 0.6),
        WallModel::make(TemperatureField::patchwise(2, 1.0, 0.8), 0.3, 1.7),
    };
}

bool crit_t_recursion() {
    bool pass = true;
    double worst = 0;
    for (const WallModel& w : recursion_wall_set())
        for (int gap = 0; gap <= 64; ++gap) {
            CoefficientBundle b = temperature_recursion(w, gap + 1, 1);
            double rel = std::fabs(b.T_li - b.T_li_closed) / std::fabs(b.T_li_closed);
            worst = std::max(worst, rel);
            pass = pass && rel <= 1e-12;
        }
    return report("t_recursion", pass,
                  fmt("recursion vs closed form worst rel err = %.3g for l-i <= 64 over 4 walls (tol 1e-12)",
                      worst));
}

bool crit_exponent_negativity() {
    // Evaluated exactly as stated at t_* = 1e-3, c = 1/15. The additive term
    // calC_l t_*^c is at least calC * 0.63 with calC > 2 for every admissible
    // wall, while the margin it must fit under is at most 1/(4 T_M); the
    // predicate therefore cannot hold at this t_* for temperatures of order
    // one, and the measured values plus the per-wall admissible thresholds
    // are printed rather than hidden.
    bool pass = true;
    double worst_value = -1e300, min_threshold = 1e300, max_threshold = 0;
    for (const WallModel& w : recursion_wall_set())
        for (int l : {1, 2, 4, 8}) {
            NegativityReport r = exponent_negativity(w, l, 1e-3);
            pass = pass && r.holds;
            worst_value = std::max(worst_value, r.value);
            min_threshold = std::min(min_threshold, r.t_star_threshold);
            max_threshold = std::max(max_threshold, r.t_star_threshold);
        }
    return report("exponent_negativity", pass,
                  fmt("predicate at t*=1e-3, c=1/15: %s (max lhs = %.3g > 0; the admissible t* thresholds span [%.3g, %.3g], far below 1e-3; t* -> 0 limit holds on every wall)",
                      pass ? "holds" : "does NOT hold", worst_value, min_threshold,
                      max_threshold));
}

// --- criterion 8: exit derivatives and the change-of-variable Jacobian ------

bool crit_exit_jacobian() {
    BallDomain ball(1.0);
    RandomStream rng(13, 0, 4);
    const double h = 1e-6;
    double worst = 0;
    int done = 0;
    while (done < 100) {
        Vec3 x{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        if (ball.xi(x) > -0.1) continue;
        Vec3 v = rng.normal3();
        if (norm(v) < 0.3) continue;
        ExitRecord e = backward_exit(ball, x, v);
        if (std::fabs(dot(e.n_xb, v)) < 0.15 * norm(v)) continue;  // away from grazing
        ExitDerivatives d = exit_derivatives(ball, x, v);
        auto relerr = [](double got, double ref) {
            return std::fabs(got - ref) / std::max(1e-6, std::fabs(ref));
        };
        for (int j = 0; j < 3; ++j) {
            Vec3 dx{};
            dx[j] = h;
            ExitRecord xp = backward_exit(ball, x + dx, v), xm = backward_exit(ball, x - dx, v);
            ExitRecord vp = backward_exit(ball, x, v + dx), vm = backward_exit(ball, x, v - dx);
            worst = std::max(worst, relerr(d.grad_x_tb[j], (xp.t_b - xm.t_b) / (2 * h)));
            worst = std::max(worst, relerr(d.grad_v_tb[j], (vp.t_b - vm.t_b) / (2 * h)));
            for (int i = 0; i < 3; ++i) {
                worst = std::max(worst, relerr(d.grad_x_xb(i, j), (xp.x_b[i] - xm.x_b[i]) / (2 * h)));
                worst = std::max(worst, relerr(d.grad_v_xb(i, j), (vp.x_b[i] - vm.x_b[i]) / (2 * h)));
            }
        }
        // Chart Jacobian determinant |t_b|^3 / |n(x_b).v| vs finite differences.
        Vec3 e1, e2;
        tangent_basis(e.n_xb, e1, e2);
        double J[3][3];
        for (int j = 0; j < 3; ++j) {
            Vec3 dv{};
            dv[j] = h;
            ExitRecord p = backward_exit(ball, x, v + dv), m = backward_exit(ball, x, v - dv);
            Vec3 dp = p.x_b - e.x_b, dm = m.x_b - e.x_b;
            J[0][j] = (dot(dp, e1) - dot(dm, e1)) / (2 * h);
            J[1][j] = (dot(dp, e2) - dot(dm, e2)) / (2 * h);
            J[2][j] = (p.t_b - m.t_b) / (2 * h);
        }
        double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                     J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                     J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        worst = std::max(worst, relerr(std::fabs(det), exit_jacobian_det(ball, x, v)));
        ++done;
    }
    bool pass = worst <= 1e-5;
    return report("exit_jacobian", pass,
                  fmt("worst FD rel err over 100 configs (all derivative blocks + |det|) = %.3g (tol 1e-5)",
                      worst));
}

// --- criterion 9: velocity lemma constant ------------------------------------

double fit_velocity_constant(const ConvexDomain& dom, const KineticWeightParams& p,
                             RandomStream& rng, long n) {
    double cmax = 0;
    long done = 0;
    while (done < n) {
        Vec3 x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (dom.xi(x) > -1e-4) continue;
        Vec3 v = rng.normal3();
        double vn = norm(v);
        if (vn < 0.1) continue;
        double tb = backward_exit(dom, x, v).t_b;
        double s2 = rng.uniform(0.0, 0.9 * tb);
        if (s2 <= 1e-8) continue;
        double lr = velocity_lemma_ratio(dom, p, x, v, 0.0, s2);
        cmax = std::max(cmax, std::fabs(lr) / (vn * s2));
        ++done;
    }
    return cmax;
}

bool crit_velocity_lemma() {
    PolynomialDomain dom({{1, 2, 0, 0},
                          {1, 0, 2, 0},
                          {1, 0, 0, 2},
                          {0.2, 4, 0, 0},
                          {0.1, 0, 4, 0},
                          {-1, 0, 0, 0}},
                         2.0, 1.0);
    KineticWeightParams p = default_weight_params(dom);
    RandomStream r1(101, 0, 5), r2(202, 0, 5), r3(303, 0, 5);
    double c1 = fit_velocity_constant(dom, p, r1, 10000);
    double c2 = fit_velocity_constant(dom, p, r2, 10000);
    double cfit = std::max(c1, c2);
    double spread = std::fabs(c1 - c2) / (0.5 * (c1 + c2));

    long violations = 0, done = 0;
    while (done < 10000) {
        Vec3 x{r3.uniform(-1, 1), r3.uniform(-1, 1), r3.uniform(-1, 1)};
        if (dom.xi(x) > -1e-4) continue;
        Vec3 v = r3.normal3();
        double vn = norm(v);
        if (vn < 0.1) continue;
        double tb = backward_exit(dom, x, v).t_b;
        double s2 = r3.uniform(0.0, 0.9 * tb);
        if (s2 <= 1e-8) continue;
        double lr = velocity_lemma_ratio(dom, p, x, v, 0.0, s2);
        if (std::fabs(lr) > 2.0 * cfit * vn * s2) ++violations;
        ++done;
    }
    bool pass = std::isfinite(cfit) && cfit > 0 && spread <= 0.20 && violations == 0;
    return report("velocity_lemma", pass,
                  fmt("fitted C = %.4f / %.4f on disjoint 1e4 sets (spread %.1f%%, cap 20%%); violations of 2x bound on a third set: %ld",
                      c1, c2, 100 * spread, violations));
}

// --- criterion 10: survival decay ---------------------------------------------

bool crit_survival_decay() {
    Timer timer;
    BallDomain ball(1.0);
    WallModel wall = WallModel::make(TemperatureField::constant(1.0), 1.0, 1.0);
    RandomStream rng(17, 0, 6);
    auto curve = survival_curve(ball, wall, 0.1, {0.9, 0, 0}, {-2, 0, 0}, 12, 100000, rng);
    bool monotone = true;
    for (std::size_t k = 1; k < curve.size(); ++k)
        monotone = monotone && curve[k].estimate <= curve[k - 1].estimate + 1e-15;
    double p8 = curve[7].estimate;
    double secs = timer.elapsed();
    bool pass = monotone && p8 < 0.5 && secs < 120.0;
    return report("survival_decay", pass,
                  fmt("common-path curve exactly nonincreasing=%d; P(t_8>0) = %.2e (< 0.5); 1e5 traces in %.1f s (cap 120 s)",
                      monotone ? 1 : 0, p8, secs));
}

// --- criterion 11: weighted cycle measure --------------------------------------

bool crit_weighted_cycle() {
    BallDomain ball(1.0);
    WallModel wall = WallModel::make(TemperatureField::constant(1.0), 0.8, 0.9);
    CycleParams params;
    Vec3 x{0.5, 0.0, 0.0}, v{1.0, 0.4, 0.2};
    double tb = backward_exit(ball, x, v).t_b;
    bool pass = true;
    std::string detail;

    {
        double t = tb + 0.35;
        clks_test::CycleOracle oracle(wall, params, 48, 48);
        double ref1 = oracle.measure(x, v, t, 1);
        RandomStream rng(19, 0, 7);
        WeightedCycleResult mc1 =
            weighted_cycle_measure(ball, wall, t, x, v, 1, params, 4000000, rng);
        double rel1 = std::fabs(mc1.estimate - ref1) / ref1;
        pass = pass && rel1 <= 0.01;

        clks_test::CycleOracle oracle2(wall, params, 32, 32);
        double ref2 = oracle2.measure(x, v, t, 2);
        WeightedCycleResult mc2 =
            weighted_cycle_measure(ball, wall, t, x, v, 2, params, 8000000, rng);
        double rel2 = std::fabs(mc2.estimate - ref2) / ref2;
        pass = pass && rel2 <= 0.01;
        detail += fmt("k=1 MC %.5g vs quad %.5g (rel %.3g); k=2 MC %.5g vs quad %.5g (rel %.3g; tol 1%%)",
                      mc1.estimate, ref1, rel1, mc2.estimate, ref2, rel2);
    }
    {
        double t = tb + params.t_star;  // window within the lemma's regime
        RandomStream rng(23, 0, 8);
        double worst_excess = -1e300;
        for (int k = 1; k <= 6; ++k) {
            WeightedCycleResult r =
                weighted_cycle_measure(ball, wall, t, x, v, k, params, 150000, rng);
            double excess = r.estimate - (r.bound + 3.0 * r.std_error);
            worst_excess = std::max(worst_excess, excess);
            pass = pass && excess <= 0.0;
        }
        detail += fmt("; k<=6 estimates below coefficient-bundle bounds (worst excess %.3g)",
                      worst_excess);
    }
    return report("weighted_cycle", pass, detail);
}

// --- criterion 12: collision --------------------------------------------------

bool crit_collision() {
    RandomStream rng(29, 0, 9);
    double worst = 0;
    for (long i = 0; i < 1000000; ++i) {
        Vec3 u = rng.normal3() * 2.0, v = rng.normal3() * 2.0, w = rng.unit_sphere();
        CollisionPair p = post_collision(u, v, w);
        worst = std::max(worst, norm(p.u_prime + p.v_prime - (u + v)));
        worst = std::max(worst,
                         std::fabs(norm2(p.u_prime) + norm2(p.v_prime) - norm2(u) - norm2(v)));
    }
    bool cons = worst <= 1e-12;

    auto mu0 = [](const Vec3& vv) { return std::exp(-norm2(vv) / 2.0) / (2.0 * M_PI); };
    bool equil = true;
    double worst_z = 0;
    for (double speed : {0.0, 1.0, 2.5, 5.0}) {
        QGainResult r = q_gain_mc(mu0, mu0, {speed, 0, 0}, 1.0, 400000, rng);
        double q = r.gain.estimate - r.loss.estimate;
        double se = std::hypot(r.gain.std_error, r.loss.std_error);
        worst_z = std::max(worst_z, std::fabs(q) / se);
        equil = equil && std::fabs(q) <= 3.0 * se;
    }

    bool l1 = true;
    double worst_l1 = 0;
    for (double rho : {0.5, 1.0, 2.0}) {
        L1CheckResult res = k_rho_l1_check(rho);
        worst_l1 = std::max({worst_l1,
                             std::fabs(res.l1 - res.l1_expected) / res.l1_expected,
                             std::fabs(res.l1_over_r - res.l1_over_r_expected) /
                                 res.l1_over_r_expected});
        l1 = l1 && res.pass;
    }
    bool pass = cons && equil && l1;
    return report("collision", pass,
                  fmt("conservation worst defect %.3g over 1e6 triples (tol 1e-12); Q(mu0,mu0) worst |z| = %.2f (cap 3); k_rho L1 worst rel err %.3g (tol 1e-8)",
                      worst, worst_z, worst_l1));
}

// --- criterion 13: simulator equilibrium ---------------------------------------

bool crit_simulator_equilibrium() {
    Timer timer;
    BallDomain ball(1.0);
    bool pass = true;
    double min_p = 1.0;
    bool mass_all = true;
    for (double rp : {0.3, 0.7, 1.0})
        for (double rl : {0.3, 0.7, 1.0}) {
            WallModel wall = WallModel::make(TemperatureField::constant(1.0), rp, rl);
            RandomStream rng(31 + static_cast<std::uint64_t>(rp * 10 + rl * 100), 0, 10);
            EquilibriumReport rep = equilibrium_test(ball, wall, 100000, 100, rng);
            min_p = std::min({min_p, rep.p_flux, rep.p_snapshot});
            mass_all = mass_all && rep.mass_conserved;
            pass = pass && rep.p_flux > 0.01 && rep.p_snapshot > 0.01 && rep.mass_conserved;
        }

    // Two-temperature wall: energy moves from the hot patch into the gas and
    // out through the cold patch.
    WallModel two = WallModel::make(TemperatureField::patchwise(2, 1.5, 0.7), 1.0, 1.0);
    RandomStream rng(37, 0, 11);
    ParticleEnsemble ens = init_ensemble(ball, 40000, 1.1, rng);
    advance_bounces(ball, two, ens, 10, nullptr, rng);
    WallTally tally;
    advance_to_time(ball, two, ens, 6.0, &tally, rng);
    NullFluxReport nf = null_flux_tally(tally);
    bool flux_sign = nf.patch[0].energy_flux > 3.0 * nf.patch[0].energy_flux_se &&
                     nf.patch[1].energy_flux < -3.0 * nf.patch[1].energy_flux_se;
    pass = pass && flux_sign;
    double secs = timer.elapsed();
    pass = pass && secs < 300.0;
    return report("simulator_equilibrium", pass,
                  fmt("chi^2 min p = %.4f (> 0.01) over (r_perp,r_par) in {0.3,0.7,1.0}^2, both speed laws; mass conserved=%d; hot->cold energy flux z = %.1f/%.1f; %.0f s (cap 300 s)",
                      min_p, mass_all ? 1 : 0,
                      nf.patch[0].energy_flux / nf.patch[0].energy_flux_se,
                      nf.patch[1].energy_flux / nf.patch[1].energy_flux_se, secs));
}

}  // namespace

int main(int argc, char** argv) {
    std::map<std::string, std::function<bool()>> criteria = {
        {"kernel_normalization", crit_kernel_normalization},
        {"reciprocity", crit_reciprocity},
        {"sampler", crit_sampler},
        {"gaussian_identity", crit_gaussian_identity},
        {"radial_identity", crit_radial_identity},
        {"extra_term", crit_extra_term},
        {"t_recursion", crit_t_recursion},
        {"exponent_negativity", crit_exponent_negativity},
        {"exit_jacobian", crit_exit_jacobian},
        {"velocity_lemma", crit_velocity_lemma},
        {"survival_decay", crit_survival_decay},
        {"weighted_cycle", crit_weighted_cycle},
        {"collision", crit_collision},
        {"simulator_equilibrium", crit_simulator_equilibrium},
    };
    int fails = 0;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) {
            auto it = criteria.find(argv[i]);
            if (it == criteria.end()) {
                std::fprintf(stderr, "unknown criterion: %s\n", argv[i]);
                return 64;
            }
            if (!it->second()) ++fails;
        }
    } else {
        for (auto& [name, fn] : criteria)
            if (!fn()) ++fails;
    }
    return fails;
}
