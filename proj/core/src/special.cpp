#include "clks/special.hpp"

#include <cmath>

#include "clks/quadrature.hpp"

namespace clks {

namespace {

// Fixed Gauss-Legendre rules; the integrand exp(y(cos phi - 1)) is entire, so
// a 64-point rule resolves |y| <= 30 to machine precision. Above that the mass
// concentrates near phi = 0 with width ~ 1/sqrt(y); substituting
// phi = s * sqrt(2/y) makes the integrand uniformly resolvable.
constexpr int kOrder = 64;

double scaled_small(double ay) {
    double xs[kOrder], ws[kOrder];
    gauss_legendre(kOrder, xs, ws);
    double sum = 0;
    for (int i = 0; i < kOrder; ++i) {
        double phi = 0.5 * M_PI * (xs[i] + 1.0);
        sum += ws[i] * std::exp(ay * (std::cos(phi) - 1.0));
    }
    return 0.5 * sum;  // (pi/2) * sum / pi
}

double scaled_large(double ay) {
    double xs[kOrder], ws[kOrder];
    gauss_legendre(kOrder, xs, ws);
    const double scale = std::sqrt(2.0 / ay);
    const double s_max = 8.5;  // exp(y(cos(phi)-1)) < 1e-28 beyond this
    double sum = 0;
    for (int i = 0; i < kOrder; ++i) {
        double s = 0.5 * s_max * (xs[i] + 1.0);
        double phi = s * scale;
        sum += ws[i] * std::exp(ay * (std::cos(phi) - 1.0));
    }
    return 0.5 * s_max * scale * sum / M_PI;
}

}  // namespace

double i0_scaled(double y) {
    double ay = std::fabs(y);
    if (ay == 0.0) return 1.0;
    return ay <= 30.0 ? scaled_small(ay) : scaled_large(ay);
}

double i0(double y) { return std::exp(std::fabs(y)) * i0_scaled(y); }

double log_i0(double y) { return std::fabs(y) + std::log(i0_scaled(y)); }

double i0_scaled_ref(double y, double abs_tol) {
    double ay = std::fabs(y);
    QuadResult r = integrate(
        [ay](double phi) { return std::exp(ay * (std::cos(phi) - 1.0)); }, 0.0, M_PI,
        abs_tol);
    return r.value / M_PI;
}

}  // namespace clks
