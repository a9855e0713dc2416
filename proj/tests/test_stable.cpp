#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lqg/rng.hpp"
#include "lqg/stable.hpp"
#include "lqg/stats.hpp"

using namespace lqg;

TEST_SUITE_BEGIN("stable");

namespace {

const StableModel& model32() {
    static StableModel m{StableSpec{}};
    return m;
}

// One-sample KS p-value against the model CDF.
double one_sample_ks_p(std::vector<double> xs, const StableModel& m) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = m.cdf(xs[i]);
        d = std::max(d, std::abs(f - (i + 1) / n));
        d = std::max(d, std::abs(f - i / n));
    }
    const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0, sign = 1.0;
    for (int k = 1; k <= 101; ++k) {
        const double term = std::exp(-2.0 * k * k * lam * lam);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    return std::min(std::max(2.0 * p, 0.0), 1.0);
}

}  // namespace

TEST_CASE("spec validation and rho") {
    StableSpec s;
    s.stable_index = 1.5;
    CHECK(s.rho() == doctest::Approx(1.0 / 3.0));
    CHECK_NOTHROW(s.validate());
    s.stable_index = 1.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s.stable_index = 2.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    StableSpec s17;
    s17.stable_index = 1.7;
    CHECK(s17.rho() > 0.0);
    CHECK(s17.rho() < 0.5);
}

TEST_CASE("density table is a probability density with the right tail") {
    const StableModel& m = model32();
    CHECK(m.cdf(-8.0) == doctest::Approx(0.0));
    CHECK(m.cdf(1000.0) == doctest::Approx(1.0).epsilon(1e-6));
    double prev = 0.0;
    for (double x = -7.0; x < 80.0; x += 0.37) {
        CHECK(m.pdf(x) >= 0.0);
        const double c = m.cdf(x);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }
    // f(x) x^{alpha+1} -> the Levy constant.
    CHECK(m.pdf(50.0) * std::pow(50.0, 2.5) ==
          doctest::Approx(levy_jump_constant(1.5)).epsilon(0.01));
    CHECK(levy_jump_constant(1.5) ==
          doctest::Approx(3.0 / (2.0 * std::sqrt(2.0 * M_PI))).epsilon(1e-12));
}

TEST_CASE("exact increments match the characteristic-function CDF") {
    Rng rng(500, RngModule::test, 0);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = model32().sample_standard(rng);
    CHECK(one_sample_ks_p(xs, model32()) > 0.01);
}

TEST_CASE("stability: increments at dt=4 scale like 4^{2/3}") {
    Rng rng(501, RngModule::test, 0);
    const int n = 100000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = model32().sample_increment(4.0, rng);
        b[i] = std::pow(4.0, 2.0 / 3.0) * model32().sample_increment(1.0, rng);
    }
    CHECK(two_sample_ks(a, b).p_value > 0.01);
}

TEST_CASE("right tail exponent of increments") {
    Rng rng(502, RngModule::test, 0);
    std::vector<double> xs;
    xs.reserve(1'000'000);
    for (int i = 0; i < 1'000'000; ++i) {
        const double v = model32().sample_standard(rng);
        if (v > 0) xs.push_back(v);
    }
    // density slope -(alpha+1) = -5/2 over [u0, 100 u0]
    const SlopeFit fit = fit_tail_exponent(xs, 3.0, 300.0, 12);
    CHECK(fit.slope == doctest::Approx(-2.5).epsilon(0.02));
}

TEST_CASE("negative spectrum mirrors the positive one") {
    StableSpec neg;
    neg.jump_sign = JumpSign::negative;
    StableModel mneg(neg);
    Rng rng(503, RngModule::test, 0);
    const int n = 60000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = -mneg.sample_increment(1.0, rng);
        b[i] = model32().sample_increment(1.0, rng);
    }
    CHECK(two_sample_ks(a, b).p_value > 0.01);
}

TEST_CASE("path: jump point process intensity and additivity") {
    Rng rng(504, RngModule::test, 0);
    // Count recorded jumps by e-folding bin; the ratio of consecutive
    // counts converges to e^{3/2}.
    long long n_lo = 0, n_hi = 0;
    const double horizon = 2000.0;
    StablePathSample s =
        sample_stable_path(model32(), horizon, 200000, 0.0, rng, 2.0);
    const double b0 = 1.0;  // bins [b0 e^{-1}, b0) and [b0, b0 e)
    for (const auto& j : s.jumps) {
        if (j.size >= b0 / M_E && j.size < b0) ++n_lo;
        if (j.size >= b0 && j.size < b0 * M_E) ++n_hi;
    }
    CHECK(n_lo > 1000);
    const double ratio = double(n_lo) / double(n_hi);
    CHECK(ratio == doctest::Approx(std::exp(1.5)).epsilon(0.05));

    // x0 shifts the whole path by a constant.
    Rng r1(505, RngModule::test, 1);
    Rng r2(505, RngModule::test, 1);
    const StablePathSample p0 =
        sample_stable_path(model32(), 1.0, 256, 0.0, r1);
    const StablePathSample p3 =
        sample_stable_path(model32(), 1.0, 256, 3.0, r2);
    for (std::size_t i = 0; i < p0.path.size(); ++i)
        CHECK(p3.path.values[i] == doctest::Approx(p0.path.values[i] + 3.0));
}

TEST_CASE("running infimum and excursion jump identity") {
    Rng rng(506, RngModule::test, 0);
    const StablePathSample s =
        sample_stable_path(model32(), 10.0, 20000, 0.5, rng, 2.0);
    const std::vector<double> inf = running_infimum(s.path);
    CHECK(inf[0] == s.path.values[0]);
    for (std::size_t i = 1; i < inf.size(); ++i) {
        CHECK(inf[i] <= inf[i - 1] + 1e-15);
        CHECK(inf[i] <= s.path.values[i]);
    }
    // Jumps of X - I match the jumps of X: reading increments of the
    // reflected path above the same threshold gives the same set.
    long long mismatches = 0;
    for (std::size_t i = 1; i < s.path.size(); ++i) {
        const double dX = s.path.values[i] - s.path.values[i - 1];
        const double dR =
            (s.path.values[i] - inf[i]) - (s.path.values[i - 1] - inf[i - 1]);
        const bool jx = dX >= s.jump_threshold;
        const bool jr = dR >= s.jump_threshold;
        if (jx != jr) ++mismatches;
        if (jx && std::abs(dX - dR) > 1e-12) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("first passage below zero happens ever more surely") {
    Rng rng(507, RngModule::test, 0);
    auto frac_hit = [&](double horizon) {
        int hit = 0;
        const int n = 400;
        for (int i = 0; i < n; ++i) {
            const StablePathSample s = sample_stable_path(
                model32(), horizon, static_cast<int>(horizon * 100), 1.0, rng);
            for (double v : s.path.values)
                if (v <= 0.0) {
                    ++hit;
                    break;
                }
        }
        return hit / 400.0;
    };
    const double f_short = frac_hit(2.0);
    const double f_long = frac_hit(50.0);
    CHECK(f_long > f_short);
    CHECK(f_long > 0.8);
}

TEST_CASE("excursions are positive with jumps inside the window") {
    Rng rng(508, RngModule::test, 0);
    const auto trunc = StableTruncation::by_height(0.1, 0.02, 20.0);
    for (int rep = 0; rep < 50; ++rep) {
        const StableExcursion e =
            sample_stable_excursion(model32(), trunc, 256, rng);
        CHECK(e.path.values.front() == 0.0);
        CHECK(e.path.values.back() == 0.0);
        for (std::size_t i = 1; i + 1 < e.path.size(); ++i)
            CHECK(e.path.values[i] > 0.0);
        for (const auto& j : e.jumps) {
            CHECK(j.size > 0.0);
            CHECK(j.time > 0.0);
            CHECK(j.time < e.duration);
        }
        const double mx =
            *std::max_element(e.path.values.begin(), e.path.values.end());
        CHECK(mx >= 0.1);
    }
}

TEST_CASE("excursion spatial rescaling scales the jumps by t^{2/3}") {
    Rng rng(509, RngModule::test, 0);
    const int n = 4000;
    std::vector<double> j1, j8;
    for (int i = 0; i < n; ++i) {
        const StableExcursion a = sample_stable_excursion(
            model32(), StableTruncation::fixed(1.0), 256, rng, 4.0);
        const StableExcursion b = sample_stable_excursion(
            model32(), StableTruncation::fixed(8.0), 256, rng, 4.0);
        for (const auto& j : a.jumps) j1.push_back(j.size);
        for (const auto& j : b.jumps) j8.push_back(j.size * std::pow(8.0, -2.0 / 3.0));
    }
    CHECK(two_sample_ks(j1, j8).p_value > 0.01);
}

TEST_CASE("min_max_jump truncation keeps what it says") {
    Rng rng(510, RngModule::test, 0);
    const auto trunc = StableTruncation::by_jump(0.5, 0.05, 20.0);
    for (int rep = 0; rep < 20; ++rep) {
        const StableExcursion e =
            sample_stable_excursion(model32(), trunc, 256, rng, 2.0);
        double mj = 0.0;
        for (std::size_t i = 1; i < e.path.size(); ++i)
            mj = std::max(mj, e.path.values[i] - e.path.values[i - 1]);
        CHECK(mj >= 0.5);
    }
}

TEST_CASE("jump-count clock recovers elapsed time") {
    // Synthetic point process with the known intensity c0 u^{-5/2}:
    // explicit list at j_max = 6.
    const double c0 = levy_jump_constant(1.5);
    Rng rng(511, RngModule::test, 0);
    const int j_max = 6;
    const double lo = std::exp(-(j_max + 1.0));
    std::vector<JumpRecord> jumps;
    // draw the whole PPP above lo: N ~ Poisson(T * c0 * (2/3) lo^{-3/2})
    const double T = 1.0;
    const double mass = T * c0 * (2.0 / 3.0) * std::pow(lo, -1.5);
    const long long n = rng.poisson(mass);
    for (long long i = 0; i < n; ++i) {
        // inverse-CDF Pareto(3/2) above lo
        const double u = rng.uniform();
        jumps.push_back({rng.uniform() * T, lo * std::pow(u, -2.0 / 3.0)});
    }
    const TimeEstimate est = recover_elapsed_time(jumps, j_max, c0);
    CHECK_FALSE(est.infinite_variance_flag);
    CHECK(est.value == doctest::Approx(T).epsilon(0.05));

    // doubling the window doubles the estimate (Poisson additivity):
    // append an independent second window of the same length.
    std::vector<JumpRecord> doubled = jumps;
    const long long n2 = rng.poisson(mass);
    for (long long i = 0; i < n2; ++i)
        doubled.push_back({T + rng.uniform() * T,
                           lo * std::pow(rng.uniform(), -2.0 / 3.0)});
    const TimeEstimate est2 = recover_elapsed_time(doubled, j_max, c0);
    CHECK(est2.value == doctest::Approx(2.0 * T).epsilon(0.08));

    // empty list flags infinite variance
    const TimeEstimate empty = recover_elapsed_time({}, j_max, c0);
    CHECK(empty.infinite_variance_flag);
    CHECK(empty.value == 0.0);
}

TEST_CASE("self-similarity of path marginals") {
    Rng rng(512, RngModule::test, 0);
    const int n = 30000;
    for (double u : {2.0, 8.0}) {
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            const StablePathSample p =
                sample_stable_path(model32(), u, 64, 0.0, rng);
            a[i] = std::pow(u, -2.0 / 3.0) * p.path.values.back();
            const StablePathSample q =
                sample_stable_path(model32(), 1.0, 64, 0.0, rng);
            b[i] = q.path.values.back();
        }
        CHECK(two_sample_ks(a, b).p_value > 0.01);
    }
}

TEST_CASE("duality of first passage and the conditioned dual") {
    DualityConfig cfg;
    cfg.threads = 2;
    const DualityReport rep =
        check_time_reversal_duality(model32(), 1.0, 2500, 513, cfg);
    CHECK(rep.kept_forward > 1500);
    CHECK(rep.kept_reversed > 1500);
    CHECK(rep.lifetime.p_value > 0.01);
    CHECK(rep.jump_size.p_value > 0.01);
    CHECK(rep.midpoint.p_value > 0.01);
}

TEST_SUITE_END();
