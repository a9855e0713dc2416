#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lqg/brownian.hpp"
#include "lqg/cone_times.hpp"
#include "lqg/path.hpp"
#include "lqg/rng.hpp"

namespace lqg {

// Correlated Brownian bridge 0 -> endpoint on [0,1] conditioned to stay in
// the positive quadrant, approximated by one of two relaxations:
//   route a: relaxation_delta > 0, keep both coordinates >= -delta;
//   route b: start_offset > 0, start at (s,s) and keep both >= 0.
// Exactly one of the two must be positive; (0,0) endpoint gives the loop.
struct QuadrantBridgeSpec {
    double correlation_alpha = 0.0;
    PlanarPoint endpoint{0.0, 0.0};
    double relaxation_delta = 0.1;
    double start_offset = 0.0;
    int n_steps = 1 << 12;
    long long max_attempts = 400'000'000;

    void validate() const;
    double barrier() const { return relaxation_delta > 0.0 ? -relaxation_delta : 0.0; }
    PlanarPoint start() const {
        return start_offset > 0.0 ? PlanarPoint{start_offset, start_offset}
                                  : PlanarPoint{0.0, 0.0};
    }
};

struct LoopSample {
    SampledPath path;
    long long attempts = 0;  // bridges drawn until acceptance
};

// Thrown when a rejection budget runs out; carries the empirical
// acceptance rate observed so far.
struct RetryLimitError : std::runtime_error {
    RetryLimitError(const std::string& what, long long attempts, long long accepted);
    long long attempts;
    long long accepted;
};

LoopSample sample_quadrant_loop(const QuadrantBridgeSpec& spec, Rng& rng);

// Replace the path on [s,t] by a fresh conditioned bridge between Z_s and
// Z_t (same barrier as the spec); endpoints of the window are unchanged.
SampledPath resample_middle_segment(const SampledPath& path, double s, double t,
                                    const QuadrantBridgeSpec& spec, Rng& rng);

// Length-1 cone excursion with terminal displacement epsilon: the loop
// sampler run to the boundary point (epsilon,0) or (0,epsilon). The
// correlated Gaussian bridge is time-reversible, so bridging outward from
// the origin samples the same law as the reversed conditioned bridge.
LoopSample cone_excursion_as_loop(double epsilon, ConeOrientation orientation,
                                  const QuadrantBridgeSpec& spec, Rng& rng);

struct EkEstimate {
    int k = 0;
    double p_hat = 0.0;
    double stderr_ = 0.0;
    long long n_trials = 0;
};

struct EkConfig {
    double resolution = 1.0 / 32.0;   // grid step of the two-sided walk
    double closure_cap_factor = 6.0;  // simulate to cap * (k+1) past the start
    int threads = 1;
};

// Monte Carlo estimate of P[E_k]: a cone excursion starting in [-k-1,-k]
// of length >= k+1 with terminal displacement <= 1, on a correlated
// two-sided Brownian walk at fixed resolution.
std::vector<EkEstimate> estimate_ek_probability(double alpha,
                                                const std::vector<int>& k_values,
                                                long long n_trials,
                                                std::uint64_t seed,
                                                const EkConfig& cfg = {});

// Linear map sending the correlated pair to a standard planar BM; the
// quadrant becomes a wedge of opening theta = arccos(-alpha).
struct WedgeMap {
    double theta = M_PI / 2.0;
    double zeta = 2.0;
    double lambda[2][2] = {{1.0, 0.0}, {0.0, 1.0}};

    static WedgeMap make(double alpha);
};

SampledPath wedge_transform(const SampledPath& path, const WedgeMap& map);

}  // namespace lqg
