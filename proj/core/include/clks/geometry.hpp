#pragma once

// Convex level-set domains Omega = { xi < 0 }, outward normals, backward exit
// times, the kinetic-distance weight alpha and the exit-map derivatives.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "clks/linalg.hpp"

namespace clks {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateGradient : GeometryError { using GeometryError::GeometryError; };
struct ZeroVelocity : GeometryError { using GeometryError::GeometryError; };
struct NoExit : GeometryError { using GeometryError::GeometryError; };
struct GrazingRay : GeometryError { using GeometryError::GeometryError; };
struct ZeroWeight : GeometryError { using GeometryError::GeometryError; };

inline constexpr double kLevelTol = 1e-10;   // level-set residual tolerance
inline constexpr double kGradTol = 1e-12;    // degenerate-gradient threshold
inline constexpr double kGrazeTol = 1e-8;    // on |n.v|/|v|

class ConvexDomain {
  public:
    virtual ~ConvexDomain() = default;
    virtual double xi(const Vec3& x) const = 0;
    virtual Vec3 grad_xi(const Vec3& x) const = 0;
    virtual Mat3 hess_xi(const Vec3& x) const = 0;

    double convexity_lower_bound = 0;  // c_xi: zeta'H zeta >= c_xi |zeta|^2
    double bounding_radius = 0;
    double c2_norm_estimate = 0;       // max of |xi|,|grad|,|hess| over Omega-bar
    std::string name;

    bool inside(const Vec3& x) const { return xi(x) < 0.0; }
};

// xi = |x|^2 - R^2 (scale > 0 rescales the level set without moving it;
// scale = 0.5, R = 1 gives |grad xi| = 1 on the boundary).
struct BallDomain final : ConvexDomain {
    explicit BallDomain(double radius = 1.0, double scale = 1.0);
    double xi(const Vec3& x) const override;
    Vec3 grad_xi(const Vec3& x) const override;
    Mat3 hess_xi(const Vec3& x) const override;
    double radius, scale;
};

// xi = sum x_i^2 / a_i^2 - 1.
struct EllipsoidDomain final : ConvexDomain {
    explicit EllipsoidDomain(Vec3 semi_axes);
    double xi(const Vec3& x) const override;
    Vec3 grad_xi(const Vec3& x) const override;
    Mat3 hess_xi(const Vec3& x) const override;
    Vec3 axes;
};

// User-supplied polynomial level set, total degree <= 4, with analytic
// gradient / Hessian. Convexity bound and bounding radius must be supplied
// (or are sampled if left <= 0, which is an estimate, not a certificate).
struct PolynomialDomain final : ConvexDomain {
    struct Term {
        double coeff;
        int px, py, pz;
    };
    PolynomialDomain(std::vector<Term> terms, double convexity_bound = 0,
                     double bound_radius = 0);
    double xi(const Vec3& x) const override;
    Vec3 grad_xi(const Vec3& x) const override;
    Mat3 hess_xi(const Vec3& x) const override;
    std::vector<Term> terms;
};

struct ExitRecord {
    double t_b = 0;        // backward exit time
    Vec3 x_b;              // exit point on the boundary
    Vec3 n_xb;             // unit outward normal at x_b
    bool grazing = false;  // |n.v|/|v| <= kGrazeTol
};

struct ExitDerivatives {
    Vec3 grad_x_tb;   // d t_b / d x
    Vec3 grad_v_tb;   // d t_b / d v
    Mat3 grad_x_xb;   // [i][j] = d (x_b)_i / d x_j
    Mat3 grad_v_xb;   // [i][j] = d (x_b)_i / d v_j
};

// Smooth nondecreasing cutoff: chi(s) = s on [0, eps], = 2 eps on [4 eps, inf),
// quintic blend in between with 0 <= chi' <= 1 everywhere.
struct KineticWeightParams {
    double eps = 0.02;
    double chi(double s) const;
    double chi_prime(double s) const;
};

Vec3 outward_normal(const ConvexDomain& dom, const Vec3& x);

// Unique positive root of s -> xi(x - s v); bracketing march + bisection with
// a Newton polish. Strict convexity of xi along the ray gives a single
// crossing on the exiting branch.
ExitRecord backward_exit(const ConvexDomain& dom, const Vec3& x, const Vec3& v);

ExitDerivatives exit_derivatives(const ConvexDomain& dom, const Vec3& x, const Vec3& v);

// |det d(chart(x_b), t_b)/d v| for an orthonormal boundary chart:
// |t_b|^3 / |n(x_b) . v|.
double exit_jacobian_det(const ConvexDomain& dom, const Vec3& x, const Vec3& v);

// alpha_tilde = sqrt((v.grad xi)^2 - 2 xi (v.hess xi.v)); alpha = chi_eps(alpha_tilde).
double kinetic_distance_raw(const ConvexDomain& dom, const Vec3& x, const Vec3& v);
double kinetic_distance(const ConvexDomain& dom, const KineticWeightParams& p,
                        const Vec3& x, const Vec3& v);

// log[ alpha(x - s2 v, v) / alpha(x - s1 v, v) ]; throws ZeroWeight at grazing.
double velocity_lemma_ratio(const ConvexDomain& dom, const KineticWeightParams& p,
                            const Vec3& x, const Vec3& v, double s1, double s2);

// Default cutoff scale: 0.01 * C2-norm estimate.
KineticWeightParams default_weight_params(const ConvexDomain& dom);

}  // namespace clks
