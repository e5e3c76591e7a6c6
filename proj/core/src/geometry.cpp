#include "clks/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace clks {

BallDomain::BallDomain(double r, double s) : radius(r), scale(s) {
    if (r <= 0 || s <= 0) throw std::invalid_argument("BallDomain: radius/scale > 0");
    convexity_lower_bound = 2.0 * s;
    bounding_radius = r;
    c2_norm_estimate = std::max({s * r * r, 2.0 * s * r, 2.0 * s});
    name = "ball";
}
double BallDomain::xi(const Vec3& x) const { return scale * (norm2(x) - radius * radius); }
Vec3 BallDomain::grad_xi(const Vec3& x) const { return x * (2.0 * scale); }
Mat3 BallDomain::hess_xi(const Vec3&) const { return Mat3::identity() * (2.0 * scale); }

EllipsoidDomain::EllipsoidDomain(Vec3 a) : axes(a) {
    if (a.x <= 0 || a.y <= 0 || a.z <= 0)
        throw std::invalid_argument("EllipsoidDomain: semi-axes > 0");
    double amax = std::max({a.x, a.y, a.z});
    convexity_lower_bound = 2.0 / (amax * amax);
    bounding_radius = amax;
    double amin = std::min({a.x, a.y, a.z});
    c2_norm_estimate = std::max(2.0 * amax / (amin * amin), 2.0 / (amin * amin));
    name = "ellipsoid";
}
double EllipsoidDomain::xi(const Vec3& x) const {
    return x.x * x.x / (axes.x * axes.x) + x.y * x.y / (axes.y * axes.y) +
           x.z * x.z / (axes.z * axes.z) - 1.0;
}
Vec3 EllipsoidDomain::grad_xi(const Vec3& x) const {
    return {2.0 * x.x / (axes.x * axes.x), 2.0 * x.y / (axes.y * axes.y),
            2.0 * x.z / (axes.z * axes.z)};
}
Mat3 EllipsoidDomain::hess_xi(const Vec3&) const {
    Mat3 h;
    h(0, 0) = 2.0 / (axes.x * axes.x);
    h(1, 1) = 2.0 / (axes.y * axes.y);
    h(2, 2) = 2.0 / (axes.z * axes.z);
    return h;
}

namespace {
double ipow(double b, int e) {
    double r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
}  // namespace

PolynomialDomain::PolynomialDomain(std::vector<Term> t, double cvx, double rad)
    : terms(std::move(t)) {
    for (const auto& tm : terms)
        if (tm.px < 0 || tm.py < 0 || tm.pz < 0 || tm.px + tm.py + tm.pz > 4)
            throw std::invalid_argument("PolynomialDomain: total degree <= 4");
    name = "polynomial";
    bounding_radius = rad;
    convexity_lower_bound = cvx;
    if (bounding_radius <= 0) {
        // Root-march along coordinate rays; estimate only.
        double r = 0;
        for (int axis = 0; axis < 3; ++axis)
            for (double sgn : {-1.0, 1.0}) {
                Vec3 d{};
                d[axis] = sgn;
                double s = 0;
                while (s < 100.0 && xi(d * s) < 0) s += 1e-3;
                r = std::max(r, s);
            }
        bounding_radius = r > 0 ? 1.05 * r : 1.0;
    }
    if (convexity_lower_bound <= 0 || c2_norm_estimate <= 0) {
        double cmin = 1e300, cmax = 0;
        int n = 24;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= n; ++k) {
                    Vec3 x{bounding_radius * (2.0 * i / n - 1.0),
                           bounding_radius * (2.0 * j / n - 1.0),
                           bounding_radius * (2.0 * k / n - 1.0)};
                    if (xi(x) > 0) continue;
                    Mat3 h = hess_xi(x);
                    // Min eigenvalue lower bound via Gershgorin.
                    for (int r = 0; r < 3; ++r) {
                        double off = 0;
                        for (int c = 0; c < 3; ++c)
                            if (c != r) off += std::fabs(h(r, c));
                        cmin = std::min(cmin, h(r, r) - off);
                    }
                    double hn = 0;
                    for (int q = 0; q < 9; ++q) hn += h.m[q] * h.m[q];
                    cmax = std::max({cmax, std::fabs(xi(x)), norm(grad_xi(x)), std::sqrt(hn)});
                }
        if (convexity_lower_bound <= 0) convexity_lower_bound = std::max(cmin, 1e-12);
        c2_norm_estimate = cmax;
    }
}
double PolynomialDomain::xi(const Vec3& x) const {
    double s = 0;
    for (const auto& t : terms) s += t.coeff * ipow(x.x, t.px) * ipow(x.y, t.py) * ipow(x.z, t.pz);
    return s;
}
Vec3 PolynomialDomain::grad_xi(const Vec3& x) const {
    Vec3 g{};
    for (const auto& t : terms) {
        if (t.px > 0) g.x += t.coeff * t.px * ipow(x.x, t.px - 1) * ipow(x.y, t.py) * ipow(x.z, t.pz);
        if (t.py > 0) g.y += t.coeff * t.py * ipow(x.x, t.px) * ipow(x.y, t.py - 1) * ipow(x.z, t.pz);
        if (t.pz > 0) g.z += t.coeff * t.pz * ipow(x.x, t.px) * ipow(x.y, t.py) * ipow(x.z, t.pz - 1);
    }
    return g;
}
Mat3 PolynomialDomain::hess_xi(const Vec3& x) const {
    Mat3 h;
    for (const auto& t : terms) {
        int p[3] = {t.px, t.py, t.pz};
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                int q[3] = {p[0], p[1], p[2]};
                double c = t.coeff;
                c *= q[i];
                if (q[i] <= 0) continue;
                q[i] -= 1;
                c *= q[j];
                if (c == 0 || q[j] < 0) continue;
                q[j] -= 1;
                if (q[0] < 0 || q[1] < 0 || q[2] < 0) continue;
                double val = c * ipow(x.x, q[0]) * ipow(x.y, q[1]) * ipow(x.z, q[2]);
                h(i, j) += val;
                if (i != j) h(j, i) += val;
            }
    }
    return h;
}

Vec3 outward_normal(const ConvexDomain& dom, const Vec3& x) {
    if (std::fabs(dom.xi(x)) > 1e3 * kLevelTol * std::max(1.0, dom.c2_norm_estimate))
        throw GeometryError("outward_normal: x not on the boundary");
    Vec3 g = dom.grad_xi(x);
    double gn = norm(g);
    if (gn < kGradTol) throw DegenerateGradient("outward_normal: |grad xi| ~ 0");
    return g / gn;
}

ExitRecord backward_exit(const ConvexDomain& dom, const Vec3& x, const Vec3& v) {
    double vn = norm(v);
    if (vn == 0.0) throw ZeroVelocity("backward_exit: v = 0");
    double tol_xi = kLevelTol * std::max(1.0, dom.c2_norm_estimate);
    double xi0 = dom.xi(x);
    if (xi0 > tol_xi) throw GeometryError("backward_exit: x outside Omega");

    auto g = [&](double s) { return dom.xi(x - v * s); };

    const double s_cap = 2.5 * dom.bounding_radius / vn + 1.0 / vn * 1e-12;
    double lo = 0.0, hi = 0.0;
    if (std::fabs(xi0) <= tol_xi) {
        // Boundary start: xi(0) ~ 0. If the ray is not entering, the exit is
        // immediate; otherwise step off the root at s = 0 first.
        double d0 = -dot(v, dom.grad_xi(x));
        if (d0 >= 0.0) {
            ExitRecord rec;
            rec.t_b = 0.0;
            rec.x_b = x;
            rec.n_xb = outward_normal(dom, x);
            rec.grazing = std::fabs(dot(rec.n_xb, v)) <= kGrazeTol * vn;
            return rec;
        }
        double step = dom.bounding_radius / (8.0 * vn);
        lo = step * 1e-9;
        while (g(lo) >= 0 && lo > 1e-300) lo *= 0.25;  // extremely grazing entry
    }
    // March until the sign change (single crossing by convexity).
    {
        double step = dom.bounding_radius / (8.0 * vn);
        double s = std::max(lo, 0.0);
        bool found = false;
        while (s < s_cap) {
            double nxt = s + step;
            if (g(nxt) > 0) {
                lo = s;
                hi = nxt;
                found = true;
                break;
            }
            s = nxt;
        }
        if (!found) throw NoExit("backward_exit: no sign change within the bounding diameter");
    }
    // Bisect to a short bracket, then let Newton take over (the crossing is
    // transversal whenever the ray is not grazing).
    double width0 = hi - lo;
    for (int it = 0; it < 24 && (hi - lo) > 1e-6 * width0; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0 ? hi : lo) = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        Vec3 p = x - v * s;
        double f = dom.xi(p);
        double df = -dot(v, dom.grad_xi(p));
        if (df == 0) break;
        double sn = s - f / df;
        if (!(sn > lo - width0 && sn < hi + width0)) break;
        double move = std::fabs(sn - s);
        s = sn;
        if (move <= 1e-15 * std::max(1.0, s)) break;
    }
    if (std::fabs(g(s)) > tol_xi) {
        // Newton did not settle (very flat crossing); finish by bisection.
        for (int it = 0; it < 80 && (hi - lo) > 1e-17 * std::max(1.0, hi); ++it) {
            double mid = 0.5 * (lo + hi);
            (g(mid) > 0 ? hi : lo) = mid;
        }
        s = 0.5 * (lo + hi);
    }
    ExitRecord rec;
    rec.t_b = s;
    rec.x_b = x - v * s;
    rec.n_xb = outward_normal(dom, rec.x_b);
    rec.grazing = std::fabs(dot(rec.n_xb, v)) <= kGrazeTol * vn;
    if (dom.xi(rec.x_b) > 1e2 * tol_xi)
        throw NoExit("backward_exit: root polish failed the level-set residual");
    return rec;
}

ExitDerivatives exit_derivatives(const ConvexDomain& dom, const Vec3& x, const Vec3& v) {
    ExitRecord rec = backward_exit(dom, x, v);
    double nv = dot(rec.n_xb, v);
    if (std::fabs(nv) <= kGrazeTol * norm(v))
        throw GrazingRay("exit_derivatives: |n(x_b).v| below grazing tolerance");
    ExitDerivatives d;
    const Vec3& n = rec.n_xb;
    d.grad_x_tb = n / nv;
    d.grad_v_tb = n * (-rec.t_b / nv);
    // x_b = x - t_b v, so d(x_b)_i/dx_j = delta_ij - v_i n_j/(n.v) and
    // d(x_b)_i/dv_j = -t_b delta_ij + t_b v_i n_j/(n.v).
    d.grad_x_xb = Mat3::identity() - Mat3::outer(v, n) * (1.0 / nv);
    d.grad_v_xb = Mat3::identity() * (-rec.t_b) + Mat3::outer(v, n) * (rec.t_b / nv);
    return d;
}

double exit_jacobian_det(const ConvexDomain& dom, const Vec3& x, const Vec3& v) {
    ExitRecord rec = backward_exit(dom, x, v);
    double nv = dot(rec.n_xb, v);
    if (std::fabs(nv) <= kGrazeTol * norm(v))
        throw GrazingRay("exit_jacobian_det: grazing configuration");
    double tb = std::fabs(rec.t_b);
    return tb * tb * tb / std::fabs(nv);
}

double KineticWeightParams::chi(double s) const {
    if (s <= eps) return s;
    if (s >= 4.0 * eps) return 2.0 * eps;
    double u = (s - eps) / (3.0 * eps);
    // g(u) = 1 + 3u - 2u^2 - 2u^3 + 3u^4 - u^5: value/slope match at both ends,
    // g' = 3 (1-u)^3 (1 + 5u/3) >= 0, so chi' in [0,1].
    double g = 1.0 + u * (3.0 + u * (-2.0 + u * (-2.0 + u * (3.0 - u))));
    return eps * g;
}

double KineticWeightParams::chi_prime(double s) const {
    if (s <= eps) return 1.0;
    if (s >= 4.0 * eps) return 0.0;
    double u = (s - eps) / (3.0 * eps);
    double om = 1.0 - u;
    return om * om * om * (1.0 + 5.0 * u / 3.0);
}

double kinetic_distance_raw(const ConvexDomain& dom, const Vec3& x, const Vec3& v) {
    Vec3 g = dom.grad_xi(x);
    double a = dot(v, g);
    double h = quad_form(v, dom.hess_xi(x), v);
    double sq = a * a - 2.0 * dom.xi(x) * h;
    return std::sqrt(std::max(0.0, sq));
}

double kinetic_distance(const ConvexDomain& dom, const KineticWeightParams& p,
                        const Vec3& x, const Vec3& v) {
    return p.chi(kinetic_distance_raw(dom, x, v));
}

double velocity_lemma_ratio(const ConvexDomain& dom, const KineticWeightParams& p,
                            const Vec3& x, const Vec3& v, double s1, double s2) {
    double a1 = kinetic_distance(dom, p, x - v * s1, v);
    double a2 = kinetic_distance(dom, p, x - v * s2, v);
    if (a1 == 0.0 || a2 == 0.0)
        throw ZeroWeight("velocity_lemma_ratio: alpha vanishes (grazing)");
    return std::log(a2 / a1);
}

KineticWeightParams default_weight_params(const ConvexDomain& dom) {
    return KineticWeightParams{0.01 * std::max(dom.c2_norm_estimate, 1e-12)};
}

}  // namespace clks
