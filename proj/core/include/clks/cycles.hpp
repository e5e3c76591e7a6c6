#pragma once

// Backward stochastic boundary cycles: trajectory tracing with velocities
// sampled from the boundary probability measure d sigma(v_j, v_{j-1}) =
// R(-v_{j-1} -> -v_j; x_j), survival probabilities, grazing-set bookkeeping,
// and importance-sampled weighted cycle measures with their coefficient-bundle
// bound.

#include <vector>

#include "clks/clkernel.hpp"
#include "clks/geometry.hpp"
#include "clks/lemma.hpp"
#include "clks/linalg.hpp"
#include "clks/rng.hpp"
#include "clks/wall.hpp"

namespace clks {

struct CycleParams {
    double lambda = 1.0;
    double t_star = 1e-2;
    double c = 1.0 / 15.0;
    double exp_last = 2.0;  // <v_{l-1}> exponent on the l-th factor
    double exp_mid = 4.0;   // <v_j> exponent on the intermediate factors
};

struct CycleStep {
    int j = 0;
    double t = 0;       // t_j (strictly decreasing)
    Vec3 x;             // x_j on the boundary
    Vec3 v;             // sampled v_j with n(x_j).v_j > 0
    bool grazing = false;
    double log_weight = 0;  // log of the intermediate cycle-measure factor
};

struct CycleTrace {
    double t0 = 0;
    Vec3 x0, v0;
    std::vector<CycleStep> steps;
    enum class Termination { ReachedInitialTime, MaxBounces } terminated_by =
        Termination::ReachedInitialTime;
    bool grazing_tripped = false;
};

// Backward trace: x_{j+1} = x_j - (t_j - t_{j+1}) v_j; v_{j+1} sampled by
// calling sample_outgoing with incoming velocity -v_j and negating the result.
CycleTrace sample_cycle(const ConvexDomain& dom, const WallModel& wall, double t,
                        const Vec3& x, const Vec3& v, int k_max, RandomStream& rng,
                        double lambda = 1.0, double exp_mid = 4.0);

struct SurvivalPoint {
    double estimate = 0;
    double std_error = 0;
};

// P(t_k > 0) for k = 1..k_max estimated on common traces (so the curve is
// exactly nonincreasing sample-path-wise).
std::vector<SurvivalPoint> survival_curve(const ConvexDomain& dom, const WallModel& wall,
                                          double t, const Vec3& x, const Vec3& v,
                                          int k_max, long n_samples, RandomStream& rng);

SurvivalPoint survival_probability(const ConvexDomain& dom, const WallModel& wall,
                                   double t, const Vec3& x, const Vec3& v, int k,
                                   long n_samples, RandomStream& rng);

struct WeightedCycleResult {
    double estimate = 0;
    double std_error = 0;
    double bound = 0;           // t_*^{-kc} C_{T_M,T_m}^k A_{k,1}
    double excluded_fraction = 0;
    double weight_kurtosis = 0;
    bool heavy_tail_warning = false;
    long n_indicator_hits = 0;  // traces with t_{k+1} > 0
};

// Importance-sampled estimate of  int 1_{t_{k+1} > 0} dSigma_k^{k+1}:
// k sampled velocities; intermediate factors
//   e^{lambda <v_j> t_j} <v_j>^4 e^{[1/(2T(x_j)) - 1/(2T(x_{j+1}))] |v_j|^2} / (n.v_j)
// weighted against d sigma draws, and the final factor
//   e^{lambda <v_k> t_k} <v_{k-1}>^2 e^{-[1/(4T_M) - 1/(2T(x_k))] |v_k|^2} / (n.v_k)
// absorbed analytically by sampling v_k from the exponentially tilted
// Gaussian x Rice law (the tilt constant is the closed form of the Gaussian
// and radial identities).
WeightedCycleResult weighted_cycle_measure(const ConvexDomain& dom, const WallModel& wall,
                                           double t, const Vec3& x, const Vec3& v, int k,
                                           const CycleParams& params, long n_samples,
                                           RandomStream& rng);

// The coefficient-bundle bound alone (also filled in by the estimator).
double weighted_cycle_bound(const ConvexDomain& dom, const WallModel& wall, double t,
                            const Vec3& x, const Vec3& v, int k, const CycleParams& params);

// V_j^delta membership: |v.n| > delta and |v| <= 1/delta.
bool grazing_classify(const Vec3& v, const Vec3& n, double delta);

struct TimeGapReport {
    double c_fit = 0;       // min over classified steps of (t_j - t_{j+1})/delta^3
    long n_classified = 0;
    long n_steps = 0;
    long max_count_in_window = 0;
    bool pass = false;      // c_fit > 0 over a nonempty sample
};

// Fits the time-gap constant |t_j - t_{j+1}| >= c_Omega delta^3 over MC traces.
TimeGapReport time_gap_check(const ConvexDomain& dom, const WallModel& wall, double t,
                             const Vec3& x, const Vec3& v, double delta, int k_max,
                             long n_traces, RandomStream& rng);

// Tilted draw of the final cycle velocity: returns v_k with n.v_k > 0 sampled
// from the law proportional to e^{-a |v|^2} R(-v_prev -> -v; x) / (n.v) times
// the radial measure, together with the closed-form tilt constant.
Vec3 sample_tilted_last(const WallModel& wall, const Vec3& x, const Vec3& n,
                        const Vec3& v_prev, double a_tilt, RandomStream& rng,
                        double& tilt_constant);

}  // namespace clks
