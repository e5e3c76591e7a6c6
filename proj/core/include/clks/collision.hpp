#pragma once

// Hard-sphere binary collisions and the spectral objects of the linearized
// operator: post-collision map, collision frequency nu(v), kernel majorant
// k_rho, and Monte Carlo gain-term estimation.

#include <functional>
#include <stdexcept>

#include "clks/linalg.hpp"
#include "clks/rng.hpp"

namespace clks {

struct NonUnitOmega : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CollisionPair {
    Vec3 u, v, omega, u_prime, v_prime;
};

// u' = u - [(u-v).w] w, v' = v + [(u-v).w] w; conserves momentum and energy.
CollisionPair post_collision(const Vec3& u, const Vec3& v, const Vec3& omega);

// Hard-sphere kernel B(v-u, w) = |v-u| q0(cos theta) with q0(s) = |s|:
// B = |(v-u).w|.
double hard_sphere_kernel(const Vec3& rel, const Vec3& omega);

// nu(v) = int int B(v-u,w) mu0(u) dw du with mu0 = (2 pi T0^2)^-1 e^{-|u|^2/2T0},
// reduced to a 1D radial quadrature.
double collision_frequency(double speed, double T0);
// erf/exp closed form of the same reduction (independent oracle route).
double collision_frequency_closed_form(double speed, double T0);

// comparability constants: nu(v)/(1+|v|) over |v| in [0, v_max].
void nu_comparability(double T0, double v_max, double& c1, double& c2);

// k_rho(v,u) = e^{-rho |v-u|^2} / |v-u|.
double k_rho(const Vec3& v, const Vec3& u, double rho);

struct L1CheckResult {
    double l1;              // quadrature of int k_rho du           (= 2 pi / rho)
    double l1_expected;
    double l1_over_r;       // quadrature of int k_rho/|v-u| du     (= 2 pi^{3/2}/sqrt(rho))
    double l1_over_r_expected;
    double quad_error;
    bool pass;
};
L1CheckResult k_rho_l1_check(double rho);

// Grid report of the weight-exchange ratio
//   k_rho(v,u) e^{t|v|^2 - t|u|^2} / k_rho~(v,u)
// over |v|,|u| <= v_max; the bound constant is fitted, not asserted.
double k_theta_fitted_constant(double rho, double rho_tilde, double theta_tilde,
                               double v_max, int n_grid = 12);

struct McEstimate {
    double estimate = 0;
    double std_error = 0;
};

// Monte Carlo Q_gain(f1,f2)(v) and nu(f1) f2(v) with u drawn from a Maxwellian
// proposal at temperature T_prop and omega uniform on S^2.
struct QGainResult {
    McEstimate gain;
    McEstimate loss;  // nu(f1)(v) * f2(v)
};
using VelocityFn = std::function<double(const Vec3&)>;
QGainResult q_gain_mc(const VelocityFn& f1, const VelocityFn& f2, const Vec3& v,
                      double T_prop, long n_samples, RandomStream& rng);

// Gamma_gain(f1,f2) = mu^{-1/2} Q_gain(sqrt(mu) f1, sqrt(mu) f2) with
// mu = e^{-|v|^2/(2 T_M)}.
QGainResult gamma_form_mc(const VelocityFn& f1, const VelocityFn& f2, const Vec3& v,
                          double T_M, double T_prop, long n_samples, RandomStream& rng);

}  // namespace clks
