#include "clks/clkernel.hpp"

#include <cmath>

#include "clks/quadrature.hpp"
#include "clks/special.hpp"

namespace clks {

VelocityDecomposition decompose(const Vec3& v, const Vec3& n) {
    VelocityDecomposition d;
    d.v_perp = dot(v, n);
    d.v_par = v - n * d.v_perp;
    return d;
}

double cl_log_density(const WallModel& wall, const Vec3& x, const Vec3& n,
                      const Vec3& u, const Vec3& v) {
    VelocityDecomposition du = decompose(u, n), dv = decompose(v, n);
    if (!(du.v_perp > 0.0))
        throw WrongHalfSpace("cl_log_density: need n.u > 0 for the incoming velocity");
    if (!(dv.v_perp < 0.0))
        throw WrongHalfSpace("cl_log_density: need n.v < 0 for the outgoing velocity");

    const double T = wall.temperature(x);
    const double rp = wall.r_perp, rl = wall.r_par;
    const double s = -dv.v_perp;          // |n.v|
    const double up = du.v_perp;          // |n.u|
    const double sq = std::sqrt(1.0 - rp);

    double log_pref = std::log(2.0 / (rp * rl * (2.0 - rl) * M_PI)) - 2.0 * std::log(2.0 * T);
    double normal_exp = -(s - sq * up) * (s - sq * up) / (2.0 * T * rp);
    double y = sq * s * up / (T * rp);
    Vec3 tpar = dv.v_par - du.v_par * (1.0 - rl);
    double tang_exp = -norm2(tpar) / (2.0 * T * rl * (2.0 - rl));
    return log_pref + std::log(s) + normal_exp + std::log(i0_scaled(y)) + tang_exp;
}

double diffuse_log_density(double T_w, const Vec3& n, const Vec3& v) {
    double s = std::fabs(dot(v, n));
    return std::log(2.0 / (M_PI * 4.0 * T_w * T_w)) - norm2(v) / (2.0 * T_w) + std::log(s);
}

double reciprocity_residual(const WallModel& wall, const Vec3& x, const Vec3& n,
                            const Vec3& u, const Vec3& v) {
    double T = wall.temperature(x);
    double lhs = cl_log_density(wall, x, n, u, v);
    double rhs = cl_log_density(wall, x, n, -v, -u) + (norm2(u) - norm2(v)) / (2.0 * T) +
                 std::log(std::fabs(dot(n, v)) / std::fabs(dot(n, u)));
    return lhs - rhs;
}

Vec3 sample_outgoing(const WallModel& wall, const Vec3& x, const Vec3& n,
                     const Vec3& u, RandomStream& rng) {
    VelocityDecomposition du = decompose(u, n);
    if (!(du.v_perp > 0.0))
        throw WrongHalfSpace("sample_outgoing: need n.u > 0 for the incoming velocity");
    const double T = wall.temperature(x);
    Vec3 e1, e2;
    tangent_basis(n, e1, e2);

    double sig_par = std::sqrt(T * wall.r_par * (2.0 - wall.r_par));
    Vec3 v_par = du.v_par * (1.0 - wall.r_par) + (e1 * rng.normal() + e2 * rng.normal()) * sig_par;

    double sigma = std::sqrt(T * wall.r_perp);
    double nu = std::sqrt(1.0 - wall.r_perp) * du.v_perp;
    double g1 = sigma * rng.normal() + nu;
    double g2 = sigma * rng.normal();
    double s = std::sqrt(g1 * g1 + g2 * g2);

    return v_par - n * s;
}

Vec3 limiting_reflection(ReflectionKind kind, const Vec3& n, const Vec3& u) {
    if (!(dot(n, u) > 0.0))
        throw WrongHalfSpace("limiting_reflection: need n.u > 0");
    if (kind == ReflectionKind::Specular) return u - n * (2.0 * dot(n, u));
    return -u;
}

double maxwellian_mu0(double T0, const Vec3& v) {
    return std::exp(-norm2(v) / (2.0 * T0)) / (2.0 * M_PI * T0 * T0);
}

double steady_remainder(const WallModel& wall, double T0, const Vec3& x, const Vec3& n,
                        const Vec3& v) {
    const double T = wall.temperature(x);
    const double rp = wall.r_perp, rl = wall.r_par;
    VelocityDecomposition d = decompose(v, n);
    double var_par = T0 * (1.0 - rl) * (1.0 - rl) + T * rl * (2.0 - rl);
    double var_perp = T0 * (1.0 - rp) + T * rp;
    double mu_xr = std::exp(-norm2(d.v_par) / (2.0 * var_par)) / (2.0 * M_PI * var_par) *
                   std::exp(-d.v_perp * d.v_perp / (2.0 * var_perp)) / var_perp;
    double mu0 = maxwellian_mu0(T0, v);
    return (mu_xr - mu0) / std::sqrt(mu0);
}

double rice_pdf(double s, double nu, double sigma2) {
    if (s < 0) return 0.0;
    double z = s * nu / sigma2;
    // (s/sigma^2) exp(-(s^2+nu^2)/(2 sigma^2)) I0(z), evaluated scaled.
    return s / sigma2 * std::exp(-(s - nu) * (s - nu) / (2.0 * sigma2)) * i0_scaled(z);
}

RiceCdf::RiceCdf(double nu, double sigma2, int cells) : nu_(nu), sigma2_(sigma2) {
    double sigma = std::sqrt(sigma2);
    s_max_ = nu + 12.0 * sigma;
    ds_ = s_max_ / cells;
    cum_.resize(cells + 1);
    cum_[0] = 0;
    for (int i = 0; i < cells; ++i) {
        QuadResult q = gk15_panel([this](double s) { return rice_pdf(s, nu_, sigma2_); },
                                  i * ds_, (i + 1) * ds_);
        cum_[i + 1] = cum_[i] + q.value;
    }
}

double RiceCdf::operator()(double s) const {
    if (s <= 0) return 0;
    if (s >= s_max_) return 1.0;
    double u = s / ds_;
    int i = static_cast<int>(u);
    double frac = u - i;
    double v = cum_[i] * (1 - frac) + cum_[i + 1] * frac;
    return std::min(1.0, v);  // cum_ integrates to 1 up to quadrature error
}

NormalizationResult normalization_quadrature(const WallModel& wall, const Vec3& x,
                                             const Vec3& n, const Vec3& u,
                                             double abs_tol) {
    const double T = wall.temperature(x);
    VelocityDecomposition du = decompose(u, n);
    Vec3 e1, e2;
    tangent_basis(n, e1, e2);
    double m1 = (1.0 - wall.r_par) * dot(du.v_par, e1);
    double m2 = (1.0 - wall.r_par) * dot(du.v_par, e2);
    double sig_par = std::sqrt(T * wall.r_par * (2.0 - wall.r_par));
    double sigma = std::sqrt(T * wall.r_perp);
    double nu = std::sqrt(1.0 - wall.r_perp) * du.v_perp;
    const double W = 10.0;

    NormalizationResult res;
    double err2d = 0;
    long evals = 0;
    QuadResult outer = integrate(
        [&](double s) {
            QuadResult in = integrate2d(
                [&](double a, double b) {
                    Vec3 v = e1 * a + e2 * b - n * s;
                    return std::exp(cl_log_density(wall, x, n, u, v));
                },
                m1 - W * sig_par, m1 + W * sig_par, m2 - W * sig_par, m2 + W * sig_par,
                0.1 * abs_tol);
            err2d += in.error;
            evals += in.evals;
            return in.value;
        },
        1e-12, nu + W * sigma, abs_tol);
    res.value = outer.value;
    // Truncated Gaussian mass: two tangential tails + the normal Rice tail,
    // each below erfc(W/sqrt(2))-type bounds on a unit-mass density.
    double trunc = 4.0 * std::erfc(W / std::sqrt(2.0)) + std::erfc(W / std::sqrt(2.0));
    res.error = outer.error + err2d + trunc;
    return res;
}

}  // namespace clks
