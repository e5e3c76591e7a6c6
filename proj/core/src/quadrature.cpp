#include "clks/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace clks {

namespace {

// QUADPACK G7/K15 coefficients; Gauss points are the even-indexed Kronrod ones.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

}  // namespace

QuadResult gk15_panel(const Fn1& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fk[15];
    for (int i = 0; i < 7; ++i) {
        fk[i] = f(c - h * kXgk[i]);
        fk[14 - i] = f(c + h * kXgk[i]);
    }
    fk[7] = f(c);
    double k15 = kWgk[7] * fk[7];
    for (int i = 0; i < 7; ++i) k15 += kWgk[i] * (fk[i] + fk[14 - i]);
    double g7 = kWg[3] * fk[7];
    for (int i = 0; i < 3; ++i) g7 += kWg[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
    QuadResult r;
    r.value = h * k15;
    double diff = std::fabs(h * (k15 - g7));
    r.error = std::min(diff, std::pow(200.0 * diff, 1.5));
    r.evals = 15;
    return r;
}

namespace {

void integrate_rec(const Fn1& f, double a, double b, double tol, int depth,
                   QuadResult& acc) {
    QuadResult panel = gk15_panel(f, a, b);
    acc.evals += panel.evals;
    if (panel.error <= tol || depth <= 0) {
        acc.value += panel.value;
        acc.error += panel.error;
        return;
    }
    double c = 0.5 * (a + b);
    integrate_rec(f, a, c, 0.5 * tol, depth - 1, acc);
    integrate_rec(f, c, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadResult integrate(const Fn1& f, double a, double b, double abs_tol, int max_depth) {
    QuadResult acc;
    if (a == b) return acc;
    integrate_rec(f, a, b, abs_tol, max_depth, acc);
    return acc;
}

QuadResult integrate_tail(const Fn1& f, double a, double width, double tail_bound,
                          double abs_tol) {
    QuadResult r = integrate(f, a, a + width, abs_tol);
    r.error += std::fabs(tail_bound);
    return r;
}

QuadResult integrate2d(const Fn2& f, double ax, double bx, double ay, double by,
                       double abs_tol) {
    QuadResult acc;
    double inner_tol = abs_tol / std::max(1.0, std::fabs(by - ay));
    Fn1 outer = [&](double y) {
        QuadResult in = integrate([&](double x) { return f(x, y); }, ax, bx, inner_tol);
        acc.error += in.error / std::max(1.0, std::fabs(by - ay));
        acc.evals += in.evals;
        return in.value;
    };
    QuadResult out = integrate(outer, ay, by, abs_tol);
    acc.value = out.value;
    acc.error += out.error;
    return acc;
}

void gauss_legendre(int n, double* nodes, double* weights) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) {
            for (int i = 0; i < n; ++i) {
                nodes[i] = it->second.first[i];
                weights[i] = it->second.second[i];
            }
            return;
        }
    }
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n starting from the Chebyshev-like estimate.
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::fabs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    for (int i = 0; i < n; ++i) {
        nodes[i] = x[i];
        weights[i] = w[i];
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, std::make_pair(std::move(x), std::move(w)));
}

}  // namespace clks
