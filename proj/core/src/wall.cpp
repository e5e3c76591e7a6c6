#include "clks/wall.hpp"

#include <cmath>

namespace clks {

WallModel WallModel::make(TemperatureField Tw, double r_perp, double r_par) {
    WallModel w;
    w.Tw = Tw;
    w.r_perp = r_perp;
    w.r_par = r_par;
    if (!(r_perp > 0.0 && r_perp <= 1.0))
        throw WallError("WallModel: r_perp must be in (0, 1]");
    if (!(r_par > 0.0 && r_par < 2.0))
        throw WallError("WallModel: r_par must be in (0, 2)");
    w.T_M = Tw.max_value();
    w.T_m = Tw.min_value();
    if (!(w.T_m > 0.0) || !std::isfinite(w.T_M))
        throw WallError("WallModel: wall temperature must be positive and finite");
    double rp2 = r_par * (2.0 - r_par);
    w.r_min = std::min(rp2, r_perp);
    w.r_max = std::max(rp2, r_perp);
    return w;
}

double temperature_constraint_rhs(const WallModel& w) {
    double a = (1.0 - w.r_par) / (2.0 - w.r_par);
    double b = (std::sqrt(1.0 - w.r_perp) - (1.0 - w.r_perp)) / w.r_perp;
    return std::max(a, b);
}

bool temperature_constraint(const WallModel& w) {
    return w.T_m / w.T_M > temperature_constraint_rhs(w);
}

bool small_perturbation(const WallModel& w, double T0, double delta0) {
    double dev = std::max(std::fabs(w.Tw.max_value() - T0), std::fabs(w.Tw.min_value() - T0));
    double racc = std::max(std::fabs(1.0 - w.r_perp), std::fabs(1.0 - w.r_par));
    return dev < delta0 && racc < delta0;
}

}  // namespace clks
