#pragma once

#include <stdexcept>
#include <string>

#include "clks/linalg.hpp"

namespace clks {

struct WallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wall temperature as a closed-form field over boundary points.
struct TemperatureField {
    enum class Kind { Constant, Patchwise, Smooth } kind = Kind::Constant;
    double base = 1.0;   // constant value / smooth offset
    double amp = 0.0;    // smooth: T = base + amp * x[axis]
    double t_plus = 1.0, t_minus = 1.0;  // patchwise by sign of x[axis]
    int axis = 2;
    double extent = 1.0;  // bounding radius of the domain the wall belongs to

    static TemperatureField constant(double T) {
        TemperatureField f;
        f.kind = Kind::Constant;
        f.base = T;
        return f;
    }
    static TemperatureField patchwise(int axis, double t_plus, double t_minus) {
        TemperatureField f;
        f.kind = Kind::Patchwise;
        f.axis = axis;
        f.t_plus = t_plus;
        f.t_minus = t_minus;
        return f;
    }
    static TemperatureField smooth(int axis, double base, double amp, double extent) {
        TemperatureField f;
        f.kind = Kind::Smooth;
        f.axis = axis;
        f.base = base;
        f.amp = amp;
        f.extent = extent;
        return f;
    }

    double operator()(const Vec3& x) const {
        switch (kind) {
            case Kind::Constant: return base;
            case Kind::Patchwise: return x[axis] >= 0 ? t_plus : t_minus;
            case Kind::Smooth: return base + amp * x[axis];
        }
        return base;
    }
    double max_value() const {
        switch (kind) {
            case Kind::Constant: return base;
            case Kind::Patchwise: return std::max(t_plus, t_minus);
            case Kind::Smooth: return base + std::fabs(amp) * extent;
        }
        return base;
    }
    double min_value() const {
        switch (kind) {
            case Kind::Constant: return base;
            case Kind::Patchwise: return std::min(t_plus, t_minus);
            case Kind::Smooth: return base - std::fabs(amp) * extent;
        }
        return base;
    }
};

// Accommodation coefficients r_perp in (0,1], r_par in (0,2) plus the derived
// constants T_M, T_m, r_min = min(r_par(2-r_par), r_perp), r_max = max(...).
struct WallModel {
    TemperatureField Tw;
    double r_perp = 1.0;
    double r_par = 1.0;
    double T_M = 1.0, T_m = 1.0;
    double r_min = 1.0, r_max = 1.0;

    static WallModel make(TemperatureField Tw, double r_perp, double r_par);

    double temperature(const Vec3& x) const { return Tw(x); }
    int patch(const Vec3& x) const {
        return Tw.kind == TemperatureField::Kind::Patchwise ? (x[Tw.axis] >= 0 ? 0 : 1) : 0;
    }
};

// T_m/T_M > max( (1-r_par)/(2-r_par), (sqrt(1-r_perp)-(1-r_perp))/r_perp ).
bool temperature_constraint(const WallModel& w);
double temperature_constraint_rhs(const WallModel& w);

// sup |T_w - T0| < delta0 and max(|1-r_perp|, |1-r_par|) < delta0.
bool small_perturbation(const WallModel& w, double T0, double delta0);

}  // namespace clks
