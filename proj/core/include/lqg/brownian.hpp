#pragma once

#include <optional>

#include "lqg/params.hpp"
#include "lqg/path.hpp"
#include "lqg/rng.hpp"

namespace lqg {

// Increment correlation for a planar Brownian pair, cov matrix
// [[1, rho],[rho, 1]] per unit time.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

// Correlated planar Brownian motion from the origin on [0, horizon];
// increments i.i.d. bivariate Gaussian with the gamma-determined
// correlation rho = -cos(pi gamma^2/4).
SampledPath sample_correlated_bm(const GammaParams& params, double horizon,
                                 int n_steps, Rng& rng);

// Same with an explicit correlation alpha in (-1,1).
SampledPath sample_correlated_bm_alpha(double alpha, double horizon,
                                       int n_steps, Rng& rng);

// Correlated planar Brownian bridge z0 -> z1 on [t0, t1], sampled
// sequentially (each step conditioned on the endpoint), so a barrier
// violation aborts early. Returns nullopt if any grid point drops below
// `barrier` in either coordinate.
std::optional<SampledPath> try_correlated_bridge_above(
    double alpha, PlanarPoint z0, PlanarPoint z1, double t0, double t1,
    int n_steps, double barrier, Rng& rng);

// Unconditioned variant (barrier = -infinity), never fails.
SampledPath correlated_bridge(double alpha, PlanarPoint z0, PlanarPoint z1,
                              double t0, double t1, int n_steps, Rng& rng);

// Scalar standard Brownian bridge a -> b on [0, t], n_steps intervals.
SampledPath scalar_brownian_bridge(double a, double b, double t, int n_steps,
                                   Rng& rng);

}  // namespace lqg
