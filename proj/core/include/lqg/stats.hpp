#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lqg {

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int n_points = 0;
    double r_squared = 0.0;
    long long n_in_window = 0;
};

struct KsReport {
    double statistic = 0.0;
    double p_value = 1.0;
    long long n1 = 0;
    long long n2 = 0;
};

// Log-log least squares on the binned density of `samples` over
// [window_lo, window_hi] (log-spaced bins), bootstrap standard error
// (resamples with an explicit seed). Scale-equivariant: scaling samples
// and window together leaves the slope unchanged.
SlopeFit fit_tail_exponent(const std::vector<double>& samples, double window_lo,
                           double window_hi, int n_bins,
                           int bootstrap_rounds = 200,
                           std::uint64_t bootstrap_seed = 7);

// Two-sample Kolmogorov-Smirnov with the asymptotic p-value
// (Stephens-corrected effective sample size). Deterministic in its inputs;
// rejects NaN.
KsReport two_sample_ks(const std::vector<double>& a, const std::vector<double>& b);

// KS distance only (no p-value), for ladder tables.
double ks_distance(const std::vector<double>& a, const std::vector<double>& b);

// One rung of a convergence ladder study.
struct LadderRow {
    double parameter = 0.0;
    double ks_to_next = 0.0;     // distance to the following rung
    double ks_to_finest = 0.0;   // distance to the last rung
    long long n = 0;
};

// KS distances of an observable between consecutive rungs of a parameter
// ladder and against the finest rung. sampler(i) must return the
// observable samples for ladder index i.
std::vector<LadderRow> dyadic_convergence_study(
    const std::vector<double>& ladder,
    const std::function<std::vector<double>(std::size_t)>& sampler);

// True when the sequence is non-increasing within z_tol standard errors.
bool isotonic_decreasing(const std::vector<double>& values,
                         const std::vector<double>& stderrs, double z_tol = 2.0);

// Mean / standard error of the mean.
double mean_of(const std::vector<double>& v);
double stderr_of_mean(const std::vector<double>& v);

// Pearson correlation of paired samples.
double correlation_of(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lqg
