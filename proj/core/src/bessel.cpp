#include "lqg/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqg {

double besq_step(double z, double dim, double h, Rng& rng) {
    if (!(dim > 0.0)) throw std::domain_error("besq_step: dim must be > 0");
    if (!(h > 0.0)) throw std::domain_error("besq_step: h must be > 0");
    const long long n = z > 0.0 ? rng.poisson(z / (2.0 * h)) : 0;
    return 2.0 * h * rng.gamma(static_cast<double>(n) + 0.5 * dim);
}

double besq_bridge_to_zero_step(double z, double dim, double h, double remain,
                                Rng& rng) {
    if (!(remain > 0.0) || h > remain + 1e-15)
        throw std::domain_error("besq_bridge_to_zero_step: bad time window");
    if (h >= remain) return 0.0;
    // Endpoint pinning tilts the free transition by exp(-w / 2(remain-h)):
    // the Poisson-Gamma mixture stays Poisson-Gamma with shrunk parameters.
    const double lam = z * (remain - h) / (2.0 * h * remain);
    const long long n = z > 0.0 ? rng.poisson(lam) : 0;
    const double scale = 2.0 * h * (remain - h) / remain;
    return scale * rng.gamma(static_cast<double>(n) + 0.5 * dim);
}

SampledPath bessel_bridge_zero_to_zero(double bridge_dim, double t, int n_steps,
                                       Rng& rng) {
    if (!(bridge_dim > 2.0))
        throw std::domain_error("bessel bridge dual dimension must be > 2");
    if (!(t > 0.0)) throw std::domain_error("bridge duration must be > 0");
    const double h = t / n_steps;
    SampledPath p = SampledPath::make_scalar(n_steps + 1);
    p.times[0] = 0.0;
    p.values[0] = 0.0;
    double z = 0.0;  // squared value
    for (int i = 1; i <= n_steps; ++i) {
        const double remain = (n_steps - i + 1) * h;
        z = besq_bridge_to_zero_step(z, bridge_dim, h, remain, rng);
        p.times[i] = i * h;
        p.values[i] = std::sqrt(z);
    }
    p.values[n_steps] = 0.0;
    return p;
}

SampledPath sample_bessel(double dimension, double x0, double horizon,
                          int n_steps, Rng& rng, ZeroBehavior zero) {
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
    if (x0 < 0.0) throw std::domain_error("x0 must be >= 0");

    const bool absorbing = zero == ZeroBehavior::absorbing || dimension <= 0.0;
    if (absorbing) {
        if (dimension >= 2.0)
            throw std::domain_error(
                "absorbing mode needs dimension < 2 (no zeros otherwise)");
        if (x0 == 0.0 && dimension <= 0.0)
            throw std::domain_error(
                "dimension <= 0 cannot be continued past absorption at 0");
        // First zero of BESQ^d from z: T0 = z / (2 Gamma(1 - d/2)); given
        // T0, the killed path is a BESQ^{4-d} bridge z -> 0 (duality).
        const double z0 = x0 * x0;
        const double t0 = z0 / (2.0 * rng.gamma(1.0 - 0.5 * dimension));
        const double h = horizon / n_steps;
        SampledPath p = SampledPath::make_scalar(n_steps + 1);
        p.times[0] = 0.0;
        p.values[0] = x0;
        double z = z0;
        for (int i = 1; i <= n_steps; ++i) {
            const double t = i * h;
            p.times[i] = t;
            if (t >= t0 || z <= 0.0) {
                p.values[i] = 0.0;
                z = 0.0;
                continue;
            }
            const double remain = std::max(t0 - (i - 1) * h, h);
            z = besq_bridge_to_zero_step(z, 4.0 - dimension, h, remain, rng);
            p.values[i] = std::sqrt(z);
        }
        return p;
    }

    const double h = horizon / n_steps;
    SampledPath p = SampledPath::make_scalar(n_steps + 1);
    p.times[0] = 0.0;
    p.values[0] = x0;
    double z = x0 * x0;
    for (int i = 1; i <= n_steps; ++i) {
        z = besq_step(z, dimension, h, rng);
        p.times[i] = i * h;
        p.values[i] = std::sqrt(z);
    }
    return p;
}

ExponentiatedBessel bessel_via_exponentiation(double drift_a, double horizon_qv,
                                              int n_steps, Rng& rng) {
    if (!(horizon_qv > 0.0)) throw std::invalid_argument("horizon_qv must be > 0");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    // Simulate X = B + a s on its own clock; the Bessel clock advances by
    // Z^2 ds (trapezoid in Z^2). Step chosen so the clock typically spans
    // horizon_qv within ~n_steps points.
    const double ds = horizon_qv / n_steps;
    ExponentiatedBessel out;
    out.dimension = 2.0 + 2.0 * drift_a;
    std::vector<double> times{0.0};
    std::vector<double> vals{1.0};
    double xlog = 0.0;
    double clock = 0.0;
    double zprev = 1.0;
    const double sd = std::sqrt(ds);
    const std::size_t hard_cap = static_cast<std::size_t>(n_steps) * 64 + 1024;
    while (clock < horizon_qv && times.size() < hard_cap) {
        xlog += drift_a * ds + sd * rng.normal();
        const double znew = std::exp(xlog);
        clock += 0.5 * (zprev * zprev + znew * znew) * ds;
        zprev = znew;
        times.push_back(clock);
        vals.push_back(znew);
    }
    out.path.times = std::move(times);
    out.path.values = std::move(vals);
    out.path.dim_tag = PathDim::scalar;
    return out;
}

double sample_power_law(double p, double a, double b, Rng& rng) {
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("bad power-law window");
    const double u = rng.uniform();
    if (std::abs(p + 1.0) < 1e-14) {
        return a * std::pow(b / a, u);
    }
    const double q = p + 1.0;
    const double aq = std::pow(a, q);
    const double bq = std::pow(b, q);
    return std::pow(aq + u * (bq - aq), 1.0 / q);
}

BesselExcursion sample_bessel_excursion(double dimension_delta,
                                        const ExcursionTruncation& trunc,
                                        int n_steps, Rng& rng) {
    if (!(dimension_delta < 2.0))
        throw std::domain_error(
            "excursion measure needs delta < 2 (dual dimension 4-delta > 2)");
    const double bridge_dim = 4.0 - dimension_delta;
    BesselExcursion e;
    e.dimension = dimension_delta;

    if (trunc.kind == ExcursionTruncation::Kind::fixed_duration) {
        e.duration = trunc.fixed_duration;
        e.path = bessel_bridge_zero_to_zero(bridge_dim, e.duration, n_steps, rng);
        return e;
    }

    // min_max: lifetime density t^{delta/2-2} restricted to excursions whose
    // maximum reaches min_max; joint rejection over (lifetime, bridge).
    const double p = 0.5 * dimension_delta - 2.0;
    for (long long attempt = 0; attempt < trunc.max_attempts; ++attempt) {
        const double t = sample_power_law(p, trunc.t_lo, trunc.t_hi, rng);
        SampledPath path =
            bessel_bridge_zero_to_zero(bridge_dim, t, n_steps, rng);
        const double mx = *std::max_element(path.values.begin(), path.values.end());
        if (mx >= trunc.min_max) {
            e.duration = t;
            e.path = std::move(path);
            return e;
        }
    }
    throw std::runtime_error(
        "sample_bessel_excursion: min_max retry budget exhausted");
}

}  // namespace lqg
