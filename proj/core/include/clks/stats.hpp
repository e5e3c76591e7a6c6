#pragma once

#include <cstddef>
#include <vector>

namespace clks {

// Streaming mean / variance / kurtosis (central moments, Welford-style).
struct MomentAccumulator {
    void add(double x);
    double mean() const;
    double variance() const;          // unbiased
    double std_error() const;         // of the mean
    double excess_kurtosis() const;
    std::size_t count() const { return n_; }

  private:
    std::size_t n_ = 0;
    double m1_ = 0, m2_ = 0, m3_ = 0, m4_ = 0;
};

// Regularized incomplete gamma functions: P(a,x) lower, Q(a,x) = 1 - P upper.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Chi-square survival function: P(X > chi2) with `dof` degrees of freedom.
double chi2_sf(double chi2, double dof);

// Standard normal CDF.
double normal_cdf(double x);

// Kolmogorov distribution survival Q_KS(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 l^2}.
double kolmogorov_sf(double lambda);

// One-sample KS statistic of `sample` against cdf values at the sorted sample
// points: cdf_at_sorted[i] = F(sorted_sample[i]). Returns sup |F_n - F|.
double ks_statistic(const std::vector<double>& cdf_at_sorted);

// Pearson chi-square test of `counts` against expected bin probabilities
// `probs` (both size K). Returns the p-value; chi2_out receives the statistic.
double chi2_test(const std::vector<std::size_t>& counts, const std::vector<double>& probs,
                 double* chi2_out = nullptr);

}  // namespace clks
