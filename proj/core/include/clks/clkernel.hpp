#pragma once

// Cercignani-Lampis gas-surface scattering kernel R(u -> v; x): log-density,
// exact sampling (tangential Gaussian x normal Rice), limiting reflections,
// the reciprocity residual, and the steady-problem boundary remainder.
//
// Sign conventions: u is incoming to the wall (n.u > 0), v is outgoing back
// into the domain (n.v < 0). The cycles module negates on its side.

#include <stdexcept>
#include <vector>

#include "clks/linalg.hpp"
#include "clks/rng.hpp"
#include "clks/wall.hpp"

namespace clks {

struct WrongHalfSpace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VelocityDecomposition {
    double v_perp = 0;  // v . n
    Vec3 v_par;         // v - v_perp n (in the tangent plane)
};

VelocityDecomposition decompose(const Vec3& v, const Vec3& n);

// log R(u -> v; x). The I0 exponent is folded into the Gaussian exponent:
// exp(-(s^2+(1-r)u^2)/(2Tr)) I0(sqrt(1-r) s u/(Tr)) is evaluated as
// exp(-(s - sqrt(1-r)u)^2/(2Tr)) * i0_scaled(...), so nothing overflows.
double cl_log_density(const WallModel& wall, const Vec3& x, const Vec3& n,
                      const Vec3& u, const Vec3& v);

// log of the pure diffuse kernel 2/(pi (2T)^2) e^{-|v|^2/(2T)} |n.v|.
double diffuse_log_density(double T_w, const Vec3& n, const Vec3& v);

// log R(u->v) - [log R(-v->-u) + (|u|^2-|v|^2)/(2 T_w) + log(|n.v|/|n.u|)].
double reciprocity_residual(const WallModel& wall, const Vec3& x, const Vec3& n,
                            const Vec3& u, const Vec3& v);

// Exact draw from R(u -> .; x): v_par ~ N((1-r_par) u_par, T r_par(2-r_par) I2),
// |v_perp| ~ Rice(nu = sqrt(1-r_perp) u_perp, sigma^2 = T r_perp); returns v
// with n.v < 0.
Vec3 sample_outgoing(const WallModel& wall, const Vec3& x, const Vec3& n,
                     const Vec3& u, RandomStream& rng);

enum class ReflectionKind { Specular, BounceBack };

Vec3 limiting_reflection(ReflectionKind kind, const Vec3& n, const Vec3& u);

// r_s = (mu_{x,r_par,r_perp} - mu_0)/sqrt(mu_0) with mu_0 the T0 Maxwellian
// 1/(2 pi T0^2) exp(-|v|^2/(2 T0)).
double steady_remainder(const WallModel& wall, double T0, const Vec3& x, const Vec3& n,
                        const Vec3& v);

double maxwellian_mu0(double T0, const Vec3& v);

// Rice density/cdf of the outgoing normal speed s = |v_perp| for incoming
// normal speed u_perp (closed form density; cdf by quadrature elsewhere).
double rice_pdf(double s, double nu, double sigma2);

// Quadrature-built Rice CDF on a fine grid (linear interpolation between
// cumulative Gauss-Kronrod cells).
class RiceCdf {
  public:
    RiceCdf(double nu, double sigma2, int cells = 4096);
    double operator()(double s) const;

  private:
    double nu_, sigma2_, s_max_, ds_;
    std::vector<double> cum_;
};

struct NormalizationResult {
    double value = 0;
    double error = 0;  // quadrature + truncation estimate
};

// Tensor quadrature of exp(cl_log_density) over the outgoing half-space
// {n.v < 0}: tangential box at mean +- 10 sigma, normal interval
// (0, nu + 10 sigma]; the truncated Gaussian mass enters the error.
NormalizationResult normalization_quadrature(const WallModel& wall, const Vec3& x,
                                             const Vec3& n, const Vec3& u,
                                             double abs_tol = 1e-9);

}  // namespace clks
