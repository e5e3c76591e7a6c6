#pragma once

namespace clks {

// Modified Bessel function I0 evaluated from its integral representation
// I0(y) = (1/pi) * int_0^pi exp(y cos phi) dphi.
//
// i0() overflows near |y| ~ 700; use i0_scaled / log_i0 beyond that.
double i0(double y);

// exp(-|y|) * I0(y); stable for |y| up to 1e4 and beyond.
double i0_scaled(double y);

// log I0(y) = |y| + log(i0_scaled(y)).
double log_i0(double y);

// Reference evaluation by adaptive quadrature of the defining integral
// (slow; used as the independent oracle in tests and lemma checks).
double i0_scaled_ref(double y, double abs_tol = 1e-12);

}  // namespace clks
