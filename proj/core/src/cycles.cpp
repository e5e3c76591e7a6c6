#include "clks/cycles.hpp"

#include <cmath>

#include "clks/quadrature.hpp"
#include "clks/special.hpp"
#include "clks/stats.hpp"

namespace clks {

namespace {

double bracket(const Vec3& v) { return std::sqrt(1.0 + norm2(v)); }

// Normal-speed law of d sigma stripped of its radial measure factor and
// exponentially tilted: g_b(s) = e^{b s^2} e^{-(s-nu)^2/(2 sigma^2)}
// i0_scaled(s nu / sigma^2). Sampling from g_b/Z removes the 1/(n.v) weight
// and flattens the polynomial-exponential cycle factors; Z is one smooth 1D
// integral. Used for the first cycle step, whose hit point is deterministic.
struct TiltedNormalLaw {
    double nu, sigma2, beta, d, z;

    TiltedNormalLaw(double nu_, double sigma2_, double beta_)
        : nu(nu_), sigma2(sigma2_), beta(beta_) {
        d = 1.0 - 2.0 * beta * sigma2;
        if (d <= 0) throw std::invalid_argument("TiltedNormalLaw: tilt too strong");
        QuadResult q = integrate(
            [this](double s) { return density(s); }, 0.0,
            nu / d + 14.0 * std::sqrt(sigma2 / d), 1e-12);
        z = q.value;
    }

    double density(double s) const {
        return std::exp(beta * s * s - (s - nu) * (s - nu) / (2.0 * sigma2)) *
               i0_scaled(s * nu / sigma2);
    }

    double sample(RandomStream& rng) const {
        // Gaussian envelope of the tilted law on s > 0; accept with i0_scaled.
        double sd = std::sqrt(sigma2 / d), mean = nu / d;
        for (int it = 0; it < 100000; ++it) {
            double s = mean + sd * rng.normal();
            if (s <= 0) continue;
            if (rng.uniform() <= i0_scaled(s * nu / sigma2)) return s;
        }
        throw std::runtime_error("TiltedNormalLaw: rejection sampler stalled");
    }
};

}  // namespace

CycleTrace sample_cycle(const ConvexDomain& dom, const WallModel& wall, double t,
                        const Vec3& x, const Vec3& v, int k_max, RandomStream& rng,
                        double lambda, double exp_mid) {
    if (!(t > 0.0)) throw std::invalid_argument("sample_cycle: t > 0");
    if (k_max < 1) throw std::invalid_argument("sample_cycle: k_max >= 1");
    CycleTrace trace;
    trace.t0 = t;
    trace.x0 = x;
    trace.v0 = v;

    double cur_t = t;
    Vec3 cur_x = x, prev_v = v;
    auto backfill_gamma = [&](const Vec3& x_next) {
        // Temperature telescope e^{[1/(2T(x_j)) - 1/(2T(x_{j+1}))] |v_j|^2} of the
        // previous step's factor becomes known once x_{j+1} is found.
        if (trace.steps.empty()) return;
        CycleStep& prev = trace.steps.back();
        double gamma = 0.5 / wall.temperature(prev.x) - 0.5 / wall.temperature(x_next);
        prev.log_weight += gamma * norm2(prev.v);
    };
    for (int j = 1; j <= k_max; ++j) {
        ExitRecord exit = backward_exit(dom, cur_x, prev_v);
        backfill_gamma(exit.x_b);
        double t_next = cur_t - exit.t_b;
        if (t_next <= 0.0) {
            trace.terminated_by = CycleTrace::Termination::ReachedInitialTime;
            return trace;
        }
        if (exit.grazing) trace.grazing_tripped = true;

        CycleStep step;
        step.j = j;
        step.t = t_next;
        step.x = exit.x_b;
        Vec3 n = exit.n_xb;
        step.v = -sample_outgoing(wall, exit.x_b, n, -prev_v, rng);
        double nv = dot(n, step.v);
        step.grazing = nv <= kGrazeTol * norm(step.v);
        if (step.grazing) trace.grazing_tripped = true;

        step.log_weight = lambda * bracket(step.v) * t_next +
                          exp_mid * std::log(bracket(step.v)) -
                          std::log(std::max(nv, 1e-300));
        trace.steps.push_back(step);

        cur_t = t_next;
        cur_x = exit.x_b;
        prev_v = step.v;
    }
    // One extra exit so the final sampled step carries its telescope factor.
    if (!trace.steps.empty() && !trace.steps.back().grazing)
        backfill_gamma(backward_exit(dom, cur_x, prev_v).x_b);
    trace.terminated_by = CycleTrace::Termination::MaxBounces;
    return trace;
}

std::vector<SurvivalPoint> survival_curve(const ConvexDomain& dom, const WallModel& wall,
                                          double t, const Vec3& x, const Vec3& v,
                                          int k_max, long n_samples, RandomStream& rng) {
    std::vector<long> hits(k_max + 1, 0);
    for (long i = 0; i < n_samples; ++i) {
        CycleTrace tr = sample_cycle(dom, wall, t, x, v, k_max, rng);
        std::size_t depth = tr.steps.size();  // t_k > 0 iff depth >= k
        for (int k = 1; k <= k_max; ++k)
            if (depth >= static_cast<std::size_t>(k)) ++hits[k];
    }
    std::vector<SurvivalPoint> out(k_max);
    for (int k = 1; k <= k_max; ++k) {
        double p = static_cast<double>(hits[k]) / static_cast<double>(n_samples);
        out[k - 1].estimate = p;
        out[k - 1].std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    }
    return out;
}

SurvivalPoint survival_probability(const ConvexDomain& dom, const WallModel& wall,
                                   double t, const Vec3& x, const Vec3& v, int k,
                                   long n_samples, RandomStream& rng) {
    return survival_curve(dom, wall, t, x, v, k, n_samples, rng).back();
}

Vec3 sample_tilted_last(const WallModel& wall, const Vec3& x, const Vec3& n,
                        const Vec3& v_prev, double a_tilt, RandomStream& rng,
                        double& tilt_constant) {
    const double T = wall.temperature(x);
    double u_perp = -dot(n, v_prev);
    if (!(u_perp > 0.0))
        throw WrongHalfSpace("sample_tilted_last: need n.v_prev < 0 at the hit point");
    Vec3 v_prev_par = v_prev + n * u_perp;

    double sig2_par = T * wall.r_par * (2.0 - wall.r_par);
    Vec3 m_par = v_prev_par * (1.0 - wall.r_par);
    double d_par = 1.0 + 2.0 * a_tilt * sig2_par;
    double sig2_perp = T * wall.r_perp;
    double nu = std::sqrt(1.0 - wall.r_perp) * u_perp;
    double d_perp = 1.0 + 2.0 * a_tilt * sig2_perp;
    if (d_par <= 0.0 || d_perp <= 0.0)
        throw DivergentIntegral("sample_tilted_last: tilt outside the Gaussian regime");

    double z_par = std::exp(-a_tilt * norm2(m_par) / d_par) / d_par;
    double z_perp = std::exp(-a_tilt * nu * nu / d_perp) / d_perp;
    tilt_constant = z_par * z_perp;

    Vec3 e1, e2;
    tangent_basis(n, e1, e2);
    double sig_par_t = std::sqrt(sig2_par / d_par);
    Vec3 y_par = m_par / d_par + (e1 * rng.normal() + e2 * rng.normal()) * sig_par_t;
    double sig_perp_t = std::sqrt(sig2_perp / d_perp);
    double g1 = sig_perp_t * rng.normal() + nu / d_perp;
    double g2 = sig_perp_t * rng.normal();
    double s = std::sqrt(g1 * g1 + g2 * g2);
    return y_par + n * s;
}

double weighted_cycle_bound(const ConvexDomain& dom, const WallModel& wall, double t,
                            const Vec3& x, const Vec3& v, int k, const CycleParams& params) {
    (void)t;
    ExitRecord e0 = backward_exit(dom, x, v);
    CoefficientBundle b = temperature_recursion(wall, k, 1, params.t_star, params.c,
                                                norm2(v), wall.temperature(e0.x_b));
    return std::pow(params.t_star, -k * params.c) * std::pow(b.C_TMTm, k) * b.A_lp;
}

WeightedCycleResult weighted_cycle_measure(const ConvexDomain& dom, const WallModel& wall,
                                           double t, const Vec3& x, const Vec3& v, int k,
                                           const CycleParams& params, long n_samples,
                                           RandomStream& rng) {
    if (k < 1) throw std::invalid_argument("weighted_cycle_measure: k >= 1");
    WeightedCycleResult res;
    res.bound = weighted_cycle_bound(dom, wall, t, x, v, k, params);

    ExitRecord e0 = backward_exit(dom, x, v);
    double t1 = t - e0.t_b;
    if (t1 <= 0.0) return res;  // indicator is deterministically zero

    // First step at the deterministic hit point. Two importance moves, both
    // reweighted exactly: the radial measure factor is stripped (no 1/(n.v_1)
    // in the weight) and the whole draw is tilted by e^{beta |v_1|^2} to flatten
    // the <v_1>^4 e^{lambda <v_1> t_1} growth of the cycle factor.
    const Vec3 n1 = e0.n_xb;
    const double T1 = wall.temperature(e0.x_b);
    const double sig2_perp1 = T1 * wall.r_perp;
    const double sig2_par1 = T1 * wall.r_par * (2.0 - wall.r_par);
    const double beta = 1.0 / (6.0 * std::max(sig2_perp1, sig2_par1));
    VelocityDecomposition d0 = decompose(-v, n1);
    TiltedNormalLaw first_law(std::sqrt(1.0 - wall.r_perp) * d0.v_perp, sig2_perp1, beta);
    Vec3 e1t, e2t;
    tangent_basis(n1, e1t, e2t);
    const double d_par1 = 1.0 - 2.0 * beta * sig2_par1;
    const Vec3 mean_par1 = (v - n1 * dot(v, n1)) * (1.0 - wall.r_par);
    const double sig_par1 = std::sqrt(sig2_par1 / d_par1);
    // log of Z_beta * e^{beta |m_par|^2 / d_par} / (T r_perp d_par); the
    // per-sample e^{-beta |v_1|^2} joins below.
    const double log_z1 = std::log(first_law.z) + beta * norm2(mean_par1) / d_par1 -
                          std::log(sig2_perp1 * d_par1);

    MomentAccumulator acc;
    long excluded = 0;
    for (long i = 0; i < n_samples; ++i) {
        double cur_t = t1;
        Vec3 cur_x = e0.x_b;
        Vec3 prev_v = v;
        double log_w = 0;
        bool dead = false, graze = false;
        for (int j = 1; j < k; ++j) {
            Vec3 n = j == 1 ? n1 : outward_normal(dom, cur_x);
            Vec3 vj;
            double log_meas;  // log of (factor_j * d sigma / sampling density)
            if (j == 1) {
                vj = mean_par1 / d_par1 +
                     (e1t * rng.normal() + e2t * rng.normal()) * sig_par1 +
                     n1 * first_law.sample(rng);
                log_meas = log_z1 - beta * norm2(vj);
            } else {
                vj = -sample_outgoing(wall, cur_x, n, -prev_v, rng);
                double nv = dot(n, vj);
                if (nv <= kGrazeTol * norm(vj)) {
                    graze = true;
                    break;
                }
                log_meas = -std::log(nv);
            }
            ExitRecord ex = backward_exit(dom, cur_x, vj);
            if (ex.grazing) {
                graze = true;
                break;
            }
            double gamma = 0.5 / wall.temperature(cur_x) - 0.5 / wall.temperature(ex.x_b);
            log_w += params.lambda * bracket(vj) * cur_t +
                     params.exp_mid * std::log(bracket(vj)) + gamma * norm2(vj) +
                     log_meas;
            cur_t -= ex.t_b;
            cur_x = ex.x_b;
            prev_v = vj;
            if (cur_t <= 0.0) {
                dead = true;
                break;
            }
        }
        if (graze) {
            ++excluded;
            acc.add(0.0);
            continue;
        }
        if (dead) {
            acc.add(0.0);
            continue;
        }
        Vec3 n = outward_normal(dom, cur_x);
        double a_tilt = 0.25 / wall.T_M - 0.5 / wall.temperature(cur_x);
        double z = 0;
        Vec3 vk = sample_tilted_last(wall, cur_x, n, prev_v, a_tilt, rng, z);
        double s = dot(n, vk);
        if (s <= kGrazeTol * norm(vk)) {
            ++excluded;
            acc.add(0.0);
            continue;
        }
        ExitRecord ex = backward_exit(dom, cur_x, vk);
        bool indicator = (cur_t - ex.t_b) > 0.0;
        if (!indicator) {
            acc.add(0.0);
            continue;
        }
        double w = std::exp(log_w + params.lambda * bracket(vk) * cur_t +
                            params.exp_last * std::log(bracket(prev_v)) - std::log(s)) *
                   z;
        acc.add(w);
        ++res.n_indicator_hits;
    }
    res.estimate = acc.mean();
    res.std_error = acc.std_error();
    res.excluded_fraction = static_cast<double>(excluded) / static_cast<double>(n_samples);
    res.std_error += res.excluded_fraction * std::fabs(res.estimate);
    res.weight_kurtosis = acc.excess_kurtosis();
    res.heavy_tail_warning = res.weight_kurtosis > 100.0;
    return res;
}

bool grazing_classify(const Vec3& v, const Vec3& n, double delta) {
    return std::fabs(dot(v, n)) > delta && norm(v) <= 1.0 / delta;
}

TimeGapReport time_gap_check(const ConvexDomain& dom, const WallModel& wall, double t,
                             const Vec3& x, const Vec3& v, double delta, int k_max,
                             long n_traces, RandomStream& rng) {
    TimeGapReport rep;
    double min_gap = 1e300;
    for (long i = 0; i < n_traces; ++i) {
        ExitRecord ex = backward_exit(dom, x, v);
        double cur_t = t - ex.t_b;
        Vec3 cur_x = ex.x_b;
        Vec3 prev_v = v;
        long count = 0;
        for (int j = 1; j <= k_max && cur_t > 0.0; ++j) {
            Vec3 n = outward_normal(dom, cur_x);
            Vec3 vj = -sample_outgoing(wall, cur_x, n, -prev_v, rng);
            if (dot(n, vj) <= kGrazeTol * norm(vj)) break;
            ExitRecord nxt = backward_exit(dom, cur_x, vj);
            ++rep.n_steps;
            if (grazing_classify(vj, n, delta)) {
                ++rep.n_classified;
                ++count;
                min_gap = std::min(min_gap, nxt.t_b);  // |t_j - t_{j+1}| = flight time
            }
            cur_t -= nxt.t_b;
            cur_x = nxt.x_b;
            prev_v = vj;
        }
        rep.max_count_in_window = std::max(rep.max_count_in_window, count);
    }
    rep.c_fit = rep.n_classified > 0 ? min_gap / (delta * delta * delta) : 0.0;
    rep.pass = rep.n_classified > 0 && rep.c_fit > 0.0;
    return rep;
}

}  // namespace clks
