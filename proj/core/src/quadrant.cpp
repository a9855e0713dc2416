#include "lqg/quadrant.hpp"

#include <cmath>

#include "lqg/parallel.hpp"

namespace lqg {

RetryLimitError::RetryLimitError(const std::string& what, long long attempts_,
                                 long long accepted_)
    : std::runtime_error(what + " (attempts=" + std::to_string(attempts_) +
                         ", accepted=" + std::to_string(accepted_) +
                         ", rate=" +
                         std::to_string(attempts_ > 0
                                            ? static_cast<double>(accepted_) /
                                                  static_cast<double>(attempts_)
                                            : 0.0) +
                         ")"),
      attempts(attempts_),
      accepted(accepted_) {}

void QuadrantBridgeSpec::validate() const {
    if (!(correlation_alpha > -1.0 && correlation_alpha < 1.0))
        throw std::domain_error("correlation_alpha must lie in (-1,1)");
    if (endpoint.x < 0.0 || endpoint.y < 0.0 ||
        (endpoint.x != 0.0 && endpoint.y != 0.0))
        throw std::domain_error(
            "endpoint must lie on the boundary of the positive quadrant");
    const bool a = relaxation_delta > 0.0;
    const bool b = start_offset > 0.0;
    if (a == b)
        throw std::domain_error(
            "exactly one of relaxation_delta, start_offset must be positive "
            "(both zero is the formal limit, not sampleable)");
    if (n_steps < 2) throw std::domain_error("n_steps must be >= 2");
}

LoopSample sample_quadrant_loop(const QuadrantBridgeSpec& spec, Rng& rng) {
    spec.validate();
    const double barrier = spec.barrier();
    const PlanarPoint z0 = spec.start();
    for (long long attempt = 1; attempt <= spec.max_attempts; ++attempt) {
        auto path = try_correlated_bridge_above(spec.correlation_alpha, z0,
                                                spec.endpoint, 0.0, 1.0,
                                                spec.n_steps, barrier, rng);
        if (path) return LoopSample{std::move(*path), attempt};
    }
    throw RetryLimitError("sample_quadrant_loop: rejection budget exhausted",
                          spec.max_attempts, 0);
}

SampledPath resample_middle_segment(const SampledPath& path, double s, double t,
                                    const QuadrantBridgeSpec& spec, Rng& rng) {
    spec.validate();
    if (path.dim_tag != PathDim::planar)
        throw std::invalid_argument("resample_middle_segment: planar path");
    if (!(0.0 < s && s < t && t < 1.0))
        throw std::invalid_argument("resample_middle_segment: need 0 < s < t < 1");
    const std::size_t n = path.size() - 1;
    const std::size_t is = static_cast<std::size_t>(std::lround(s * n));
    const std::size_t it = static_cast<std::size_t>(std::lround(t * n));
    if (it - is < 2) return path;  // degenerate window, nothing interior

    const double barrier = spec.barrier();
    const PlanarPoint zs{path.x(is), path.y(is)};
    const PlanarPoint zt{path.x(it), path.y(it)};
    for (long long attempt = 1; attempt <= spec.max_attempts; ++attempt) {
        auto seg = try_correlated_bridge_above(
            spec.correlation_alpha, zs, zt, path.times[is], path.times[it],
            static_cast<int>(it - is), barrier, rng);
        if (!seg) continue;
        SampledPath out = path;
        for (std::size_t j = 0; j <= it - is; ++j)
            out.set_xy(is + j, seg->x(j), seg->y(j));
        return out;
    }
    throw RetryLimitError("resample_middle_segment: rejection budget exhausted",
                          spec.max_attempts, 0);
}

LoopSample cone_excursion_as_loop(double epsilon, ConeOrientation orientation,
                                  const QuadrantBridgeSpec& spec, Rng& rng) {
    if (!(epsilon > 0.0))
        throw std::domain_error("cone_excursion_as_loop: epsilon must be > 0");
    QuadrantBridgeSpec s = spec;
    // Left excursions close in the x coordinate, so the terminal gap sits
    // in y; right ones the opposite.
    s.endpoint = orientation == ConeOrientation::left
                     ? PlanarPoint{0.0, epsilon}
                     : PlanarPoint{epsilon, 0.0};
    return sample_quadrant_loop(s, rng);
}

namespace {

// One Monte Carlo trial for E_k: correlated walk on [-k-1, cap*(k+1)],
// scan the starts inside [-k-1,-k] for a cone excursion of length >= k+1
// closing with terminal displacement <= 1.
bool ek_trial(double alpha, int k, const EkConfig& cfg, Rng& rng) {
    const double dt = cfg.resolution;
    const double t_begin = -(k + 1.0);
    const double t_end = cfg.closure_cap_factor * (k + 1.0);
    const std::size_t n =
        static_cast<std::size_t>(std::ceil((t_end - t_begin) / dt)) + 1;
    const std::size_t starts_end =
        static_cast<std::size_t>(std::lround(1.0 / dt));  // covers [-k-1,-k]
    const double sd = std::sqrt(dt);
    const double beta = std::sqrt(1.0 - alpha * alpha);

    std::vector<double> xs(n), ys(n);
    double x = 0.0, y = 0.0;
    xs[0] = 0.0;
    ys[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        x += sd * g1;
        y += sd * (alpha * g1 + beta * g2);
        xs[i] = x;
        ys[i] = y;
    }

    const double min_len = k + 1.0;
    for (std::size_t s = 0; s <= starts_end && s < n; ++s) {
        const double bx = xs[s];
        const double by = ys[s];
        std::size_t j = s + 1;
        while (j < n && xs[j] > bx && ys[j] > by) ++j;
        if (j == n || j == s + 1) continue;
        const double len = (j - s) * dt;
        if (len < min_len) continue;
        const double dx = xs[j] - bx;
        const double dy = ys[j] - by;
        const double disp = dx < dy ? std::max(dy, 0.0) : std::max(dx, 0.0);
        if (disp <= 1.0) return true;
    }
    return false;
}

}  // namespace

std::vector<EkEstimate> estimate_ek_probability(double alpha,
                                                const std::vector<int>& k_values,
                                                long long n_trials,
                                                std::uint64_t seed,
                                                const EkConfig& cfg) {
    if (!(alpha > -1.0 && alpha < 1.0))
        throw std::domain_error("estimate_ek_probability: alpha in (-1,1)");
    std::vector<EkEstimate> out;
    for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
        const int k = k_values[ki];
        if (k < 1) throw std::domain_error("estimate_ek_probability: k >= 1");
        std::vector<unsigned char> hits(static_cast<std::size_t>(n_trials), 0);
        parallel_for(static_cast<std::size_t>(n_trials), cfg.threads,
                     [&](std::size_t i) {
                         Rng trial_rng(seed, RngModule::quadrant,
                                       (static_cast<std::uint64_t>(ki) << 40) + i);
                         hits[i] = ek_trial(alpha, k, cfg, trial_rng) ? 1 : 0;
                     });
        long long count = 0;
        for (unsigned char h : hits) count += h;
        EkEstimate e;
        e.k = k;
        e.n_trials = n_trials;
        e.p_hat = static_cast<double>(count) / static_cast<double>(n_trials);
        e.stderr_ = std::sqrt(std::max(e.p_hat * (1.0 - e.p_hat), 1e-300) /
                              static_cast<double>(n_trials));
        out.push_back(e);
    }
    return out;
}

WedgeMap WedgeMap::make(double alpha) {
    if (!(alpha > -1.0 && alpha < 1.0))
        throw std::domain_error("WedgeMap: |alpha| < 1 required");
    WedgeMap m;
    m.theta = std::acos(-alpha);
    m.zeta = M_PI / m.theta;
    const double r = std::sqrt(1.0 - alpha * alpha);
    m.lambda[0][0] = 1.0;
    m.lambda[0][1] = 0.0;
    m.lambda[1][0] = -alpha / r;
    m.lambda[1][1] = 1.0 / r;
    return m;
}

SampledPath wedge_transform(const SampledPath& path, const WedgeMap& map) {
    if (path.dim_tag != PathDim::planar)
        throw std::invalid_argument("wedge_transform: planar path required");
    SampledPath out = path;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double x = path.x(i);
        const double y = path.y(i);
        out.set_xy(i, map.lambda[0][0] * x + map.lambda[0][1] * y,
                   map.lambda[1][0] * x + map.lambda[1][1] * y);
    }
    return out;
}

}  // namespace lqg
