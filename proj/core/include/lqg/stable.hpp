#pragma once

#include <cstdint>
#include <vector>

#include "lqg/path.hpp"
#include "lqg/rng.hpp"

namespace lqg {

enum class JumpSign { positive, negative };

// Spectrally one-sided alpha-stable process, alpha in (1,2).
// positivity_rho = 1 - 1/alpha = P[X_t > 0] for the positive-jump side.
struct StableSpec {
    double stable_index = 1.5;
    JumpSign jump_sign = JumpSign::positive;

    double rho() const { return 1.0 - 1.0 / stable_index; }
    void validate() const;
};

// Levy measure of the standardized (CMS unit-scale) spectrally positive
// stable: c u^{-1-alpha} du with c = alpha (1-alpha) / (Gamma(2-alpha)
// cos(pi alpha/2)); for alpha = 3/2 this is 3/(2 sqrt(2 pi)).
double levy_jump_constant(double alpha);

// Tabulated standardized density/CDF of the spectrally positive stable
// (characteristic exponent |t|^alpha (1 - i beta tan(pi alpha/2) sgn t),
// beta = +1), built once by quadrature of the Fourier inversion integral.
// Power-law tail stitched beyond the table. Shared by bridge sampling,
// truncated-increment means, and the CDF oracle used in tests.
class StableModel {
  public:
    explicit StableModel(const StableSpec& spec);

    const StableSpec& spec() const { return spec_; }
    double alpha() const { return spec_.stable_index; }

    // Standardized (unit time) spectrally positive draws/values.
    double pdf(double x) const;
    double cdf(double x) const;
    double pdf_max() const { return pdf_max_; }
    // E[X | X <= c] for the standardized law.
    double mean_below(double c) const;

    // One exact standardized increment (two-uniform CMS transform),
    // spectrally positive.
    double sample_standard(Rng& rng) const;
    // Exact increment of the signed process over time dt.
    double sample_increment(double dt, Rng& rng) const;

  private:
    StableSpec spec_;
    double x_lo_, x_hi_, dx_;
    std::vector<double> pdf_;
    std::vector<double> cdf_;      // renormalized, tail-completed
    std::vector<double> cum_xf_;   // cumulative of x f(x) dx for mean_below
    double pdf_max_;
    double tail_c_;   // f(x) ~ tail_c x^{-alpha-1} on the right
    double total_;
    double cms_b_, cms_s_;  // cached CMS constants
};

struct JumpRecord {
    double time = 0.0;
    double size = 0.0;  // magnitude; sign of the actual jump is spec.jump_sign
};

struct StablePathSample {
    SampledPath path;
    std::vector<JumpRecord> jumps;
    double jump_threshold = 0.0;
};

// Path of the spectrally one-sided process: per step, jumps above the
// threshold b = threshold_mult * dt^{1/alpha} come from the explicit
// Poisson(c b^{-alpha}/alpha dt) x Pareto(alpha) point process and are
// recorded individually; the sub-threshold part is an exact increment
// conditioned below b, means matched so each step is exactly centered.
StablePathSample sample_stable_path(const StableModel& model, double horizon,
                                    int n_steps, double x0, Rng& rng,
                                    double threshold_mult = 10.0);

std::vector<double> running_infimum(const SampledPath& path);

// Grid bridge of the spectrally positive process from `a` to `b` over
// [0, duration]: sequential exact-proposal rejection against the pinned
// endpoint density.
SampledPath stable_bridge(const StableModel& model, double a, double b,
                          double duration, int n_steps, Rng& rng);

struct StableExcursion {
    double duration = 0.0;
    SampledPath path;  // values >= 0, endpoints 0
    std::vector<JumpRecord> jumps;
};

struct StableTruncation {
    enum class Kind { fixed_duration, min_height, min_max_jump } kind =
        Kind::fixed_duration;
    double fixed_duration = 1.0;
    double min_height = 0.1;    // keep excursions with sup >= this
    double min_max_jump = 0.1;  // keep excursions whose largest jump >= this
    double t_lo = 0.02;         // lifetime proposal window
    double t_hi = 20.0;
    long long max_attempts = 50'000'000;

    static StableTruncation fixed(double t);
    static StableTruncation by_height(double m, double lo, double hi);
    static StableTruncation by_jump(double j, double lo, double hi);
};

// Excursion from the Ito measure of X - I: lifetime density proportional
// to t^{rho-2} (truncated), path the normalized excursion rescaled by the
// (1/alpha, 1) scaling. The normalized excursion is the Vervaat transform
// (cyclic shift at the minimum) of the grid bridge 0 -> 0.
StableExcursion sample_stable_excursion(const StableModel& model,
                                        const StableTruncation& trunc,
                                        int n_steps, Rng& rng,
                                        double jump_threshold_mult = 10.0);

struct KsSummary {
    double statistic = 0.0;
    double p_value = 1.0;
    long long n1 = 0, n2 = 0;
};

struct DualityConfig {
    double dt = 4e-3;
    double t_max = 20.0;     // keep trials with lifetime <= t_max
    double t_ext = 220.0;    // side B watches for late level crossings
    double jump_threshold_mult = 2.0;
    int threads = 1;
};

// Samples X from x0 > 0 to its first zero, time-reverses, and compares
// against the h-transform (h(x) = x) of the negative-jump process stopped
// at its last passage of x0. Reports two-sample KS for lifetime, jump law
// (one jump per trial), midpoint marginal, and running maximum.
struct DualityReport {
    KsSummary lifetime;
    KsSummary jump_size;
    KsSummary midpoint;
    KsSummary maximum;
    long long kept_forward = 0;
    long long kept_reversed = 0;
};

DualityReport check_time_reversal_duality(const StableModel& model, double x0,
                                          long long n_trials, std::uint64_t seed,
                                          const DualityConfig& cfg = {});

struct TimeEstimate {
    double value = 0.0;
    bool infinite_variance_flag = false;
};

// Eq-style jump-count clock for alpha = 3/2: the number of jumps with size
// in [e^{-j-1}, e^{-j}] over an interval of length T has mean
// T c0 (2/3) e^{3j/2} (e^{3/2} - 1); inverting the count at level j_max
// recovers T. c0 is the calibrated jump-intensity constant.
TimeEstimate recover_elapsed_time(const std::vector<JumpRecord>& jumps,
                                  int j_max, double c0);
TimeEstimate recover_elapsed_time_binned(long long count_at_j_max, int j_max,
                                         double c0);

}  // namespace lqg
