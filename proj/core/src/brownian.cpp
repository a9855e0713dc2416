#include "lqg/brownian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lqg {

SampledPath sample_correlated_bm_alpha(double alpha, double horizon,
                                       int n_steps, Rng& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (!(alpha > -1.0 && alpha < 1.0))
        throw std::domain_error("correlation must lie in (-1,1)");
    const double dt = horizon / n_steps;
    const double sd = std::sqrt(dt);
    const double beta = std::sqrt(1.0 - alpha * alpha);
    SampledPath p = SampledPath::make_planar(n_steps + 1);
    p.times[0] = 0.0;
    double x = 0.0, y = 0.0;
    for (int i = 1; i <= n_steps; ++i) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        x += sd * g1;
        y += sd * (alpha * g1 + beta * g2);
        p.times[i] = i * dt;
        p.set_xy(i, x, y);
    }
    return p;
}

SampledPath sample_correlated_bm(const GammaParams& params, double horizon,
                                 int n_steps, Rng& rng) {
    return sample_correlated_bm_alpha(params.bm_correlation, horizon, n_steps,
                                      rng);
}

std::optional<SampledPath> try_correlated_bridge_above(
    double alpha, PlanarPoint z0, PlanarPoint z1, double t0, double t1,
    int n_steps, double barrier, Rng& rng) {
    if (!(t1 > t0)) throw std::invalid_argument("bridge needs t1 > t0");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (!(alpha > -1.0 && alpha < 1.0))
        throw std::domain_error("correlation must lie in (-1,1)");
    const double len = t1 - t0;
    const double dt = len / n_steps;
    const double beta = std::sqrt(1.0 - alpha * alpha);
    SampledPath p = SampledPath::make_planar(n_steps + 1);
    p.times[0] = t0;
    p.set_xy(0, z0.x, z0.y);
    double x = z0.x, y = z0.y;
    for (int i = 1; i <= n_steps; ++i) {
        const double remain = len - (i - 1) * dt;
        if (i == n_steps) {
            x = z1.x;
            y = z1.y;
        } else {
            // One bridge step: drift toward the endpoint, variance
            // h * (remain - h) / remain, correlation unchanged.
            const double pull = dt / remain;
            const double sd = std::sqrt(dt * (remain - dt) / remain);
            const double g1 = rng.normal();
            const double g2 = rng.normal();
            x += (z1.x - x) * pull + sd * g1;
            y += (z1.y - y) * pull + sd * (alpha * g1 + beta * g2);
        }
        if (x < barrier || y < barrier) return std::nullopt;
        p.times[i] = t0 + i * dt;
        p.set_xy(i, x, y);
    }
    return p;
}

SampledPath correlated_bridge(double alpha, PlanarPoint z0, PlanarPoint z1,
                              double t0, double t1, int n_steps, Rng& rng) {
    auto p = try_correlated_bridge_above(alpha, z0, z1, t0, t1, n_steps,
                                         -std::numeric_limits<double>::infinity(),
                                         rng);
    return *p;
}

SampledPath scalar_brownian_bridge(double a, double b, double t, int n_steps,
                                   Rng& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("bridge needs t > 0");
    const double dt = t / n_steps;
    SampledPath p = SampledPath::make_scalar(n_steps + 1);
    p.times[0] = 0.0;
    p.values[0] = a;
    double x = a;
    for (int i = 1; i <= n_steps; ++i) {
        const double remain = t - (i - 1) * dt;
        if (i == n_steps) {
            x = b;
        } else {
            const double pull = dt / remain;
            const double sd = std::sqrt(dt * (remain - dt) / remain);
            x += (b - x) * pull + sd * rng.normal();
        }
        p.times[i] = i * dt;
        p.values[i] = x;
    }
    return p;
}

}  // namespace lqg
