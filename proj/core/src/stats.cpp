#include "clks/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clks {

void MomentAccumulator::add(double x) {
    // Pebay's one-pass central moment update.
    double n1 = static_cast<double>(n_);
    ++n_;
    double n = static_cast<double>(n_);
    double delta = x - m1_;
    double dn = delta / n;
    double dn2 = dn * dn;
    double t1 = delta * dn * n1;
    m1_ += dn;
    m4_ += t1 * dn2 * (n * n - 3 * n + 3) + 6 * dn2 * m2_ - 4 * dn * m3_;
    m3_ += t1 * dn * (n - 2) - 3 * dn * m2_;
    m2_ += t1;
}

double MomentAccumulator::mean() const { return m1_; }

double MomentAccumulator::variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double MomentAccumulator::std_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double MomentAccumulator::excess_kurtosis() const {
    if (n_ < 4 || m2_ == 0) return 0.0;
    double n = static_cast<double>(n_);
    return n * m4_ / (m2_ * m2_) - 3.0;
}

namespace {

double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, term = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    // Lentz continued fraction for Q(a,x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::domain_error("gamma_p: bad arguments");
    if (x == 0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_sf(double chi2, double dof) { return gamma_q(0.5 * dof, 0.5 * chi2); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_sf(double lambda) {
    if (lambda <= 0) return 1.0;
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

double ks_statistic(const std::vector<double>& cdf_at_sorted) {
    std::size_t n = cdf_at_sorted.size();
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::fabs(cdf_at_sorted[i] - lo));
        d = std::max(d, std::fabs(cdf_at_sorted[i] - hi));
    }
    return d;
}

double chi2_test(const std::vector<std::size_t>& counts, const std::vector<double>& probs,
                 double* chi2_out) {
    if (counts.size() != probs.size() || counts.empty())
        throw std::invalid_argument("chi2_test: size mismatch");
    std::size_t total = 0;
    for (auto c : counts) total += c;
    double chi2 = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        double e = probs[k] * static_cast<double>(total);
        if (e <= 0) throw std::invalid_argument("chi2_test: empty expected bin");
        double d = static_cast<double>(counts[k]) - e;
        chi2 += d * d / e;
    }
    if (chi2_out) *chi2_out = chi2;
    return chi2_sf(chi2, static_cast<double>(counts.size() - 1));
}

}  // namespace clks
