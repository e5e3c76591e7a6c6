#pragma once

// Adaptive 1D quadrature on a nested Gauss(7)/Kronrod(15) pair with interval
// bisection, plus small tensor helpers for 2D integrals. Every result carries
// an error estimate; callers feed it into lemma pass/fail margins.

#include <functional>

namespace clks {

struct QuadResult {
    double value = 0;
    double error = 0;  // accumulated error estimate (absolute)
    long evals = 0;
};

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

// Single G7/K15 panel on [a,b]; err is |K15-G7| based.
QuadResult gk15_panel(const Fn1& f, double a, double b);

// Adaptive bisection until the panel error sum is below abs_tol (or max_depth).
QuadResult integrate(const Fn1& f, double a, double b, double abs_tol = 1e-10,
                     int max_depth = 28);

// Semi-infinite [a, inf) for integrands with Gaussian-type decay: integrates on
// [a, a+width] adaptively and adds `tail_bound` (caller-supplied analytic bound
// on the remainder) to the error.
QuadResult integrate_tail(const Fn1& f, double a, double width, double tail_bound,
                          double abs_tol = 1e-10);

// Tensor 2D: outer adaptive in y of inner adaptive in x over a rectangle.
QuadResult integrate2d(const Fn2& f, double ax, double bx, double ay, double by,
                       double abs_tol = 1e-9);

// Fixed-order Gauss-Legendre nodes/weights on [-1,1] (computed once per n).
void gauss_legendre(int n, double* nodes, double* weights);

}  // namespace clks
