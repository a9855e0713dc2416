#pragma once

#include "lqg/path.hpp"
#include "lqg/rng.hpp"

namespace lqg {

// Exact squared-Bessel (BESQ) transitions. A BESQ^d step over h given
// X_t = z is 2h * Gamma(N + d/2) with N ~ Poisson(z / 2h); no
// discretization bias, valid for every d > 0. The drift (d-1)/(2X) of the
// Bessel SDE blows up at 0, so Euler schemes are avoided throughout.
double besq_step(double z, double dim, double h, Rng& rng);

// Exact BESQ^d bridge step toward an endpoint pinned at 0: given X = z
// with `remain` time left, advance by h. For h == remain this returns 0.
// Requires d such that the bridge is well defined (we use d > 2,
// the dual dimension of an excursion).
double besq_bridge_to_zero_step(double z, double dim, double h, double remain,
                                Rng& rng);

enum class ZeroBehavior { reflecting, absorbing };

// Bessel process of the given dimension from x0 >= 0 on [0, horizon].
// dimension > 0: exact BESQ transitions, square-rooted. The reflecting
// version is the natural extension for dimension in (0,2); the absorbing
// one stops at the first zero (drawn exactly: T0 = x0^2 / (2 Gamma(1-d/2)),
// path given T0 is the dual BESQ^{4-d} bridge). dimension <= 0: the path
// is returned only up to its first hit of 0 (absorbing forced).
SampledPath sample_bessel(double dimension, double x0, double horizon,
                          int n_steps, Rng& rng,
                          ZeroBehavior zero = ZeroBehavior::reflecting);

// exp(B_t + a t) reparameterized so the Bessel-time clock t satisfies
// d<Z>_t = dt; carries dimension = 2 + 2a. The returned grid is the
// (nonuniform) Bessel clock; values are Z. horizon_qv is the target span
// of that clock.
struct ExponentiatedBessel {
    SampledPath path;
    double dimension;
};
ExponentiatedBessel bessel_via_exponentiation(double drift_a, double horizon_qv,
                                              int n_steps, Rng& rng);

// One excursion drawn from the (truncated) Ito measure nu_delta^BES:
// lifetime density proportional to t^{delta/2 - 2}, path a BES^{4-delta}
// bridge 0 -> 0 of that length.
struct BesselExcursion {
    double duration = 0.0;
    SampledPath path;   // scalar, values >= 0, endpoints exactly 0
    double dimension = 0.0;  // the delta of nu_delta^BES
};

struct ExcursionTruncation {
    enum class Kind { fixed_duration, min_max } kind = Kind::fixed_duration;
    double fixed_duration = 1.0;
    double min_max = 0.1;      // keep excursions with sup >= min_max
    double t_lo = 1e-3;        // lifetime proposal window for min_max
    double t_hi = 8.0;
    long long max_attempts = 50'000'000;

    static ExcursionTruncation fixed(double t) {
        ExcursionTruncation tr;
        tr.kind = Kind::fixed_duration;
        tr.fixed_duration = t;
        return tr;
    }
    static ExcursionTruncation by_max(double m, double lo, double hi) {
        ExcursionTruncation tr;
        tr.kind = Kind::min_max;
        tr.min_max = m;
        tr.t_lo = lo;
        tr.t_hi = hi;
        return tr;
    }
};

BesselExcursion sample_bessel_excursion(double dimension_delta,
                                        const ExcursionTruncation& trunc,
                                        int n_steps, Rng& rng);

// BES^{4-delta} bridge 0->0 over [0,t]: sqrt of the exact BESQ bridge.
SampledPath bessel_bridge_zero_to_zero(double bridge_dim, double t, int n_steps,
                                       Rng& rng);

// Power-law draw: density proportional to t^p on [a,b], p != -1.
double sample_power_law(double p, double a, double b, Rng& rng);

}  // namespace lqg
