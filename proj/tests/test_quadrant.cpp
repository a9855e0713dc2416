#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "lqg/quadrant.hpp"
#include "lqg/rng.hpp"
#include "lqg/stats.hpp"

using namespace lqg;

TEST_SUITE_BEGIN("quadrant");

namespace {

QuadrantBridgeSpec loop_spec(double alpha, double delta, int n_steps) {
    QuadrantBridgeSpec s;
    s.correlation_alpha = alpha;
    s.relaxation_delta = delta;
    s.n_steps = n_steps;
    return s;
}

}  // namespace

TEST_CASE("spec validation") {
    QuadrantBridgeSpec s = loop_spec(0.0, 0.3, 64);
    CHECK_NOTHROW(s.validate());
    s.endpoint = {0.4, 0.2};  // not on the boundary
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s.endpoint = {0.4, 0.0};
    CHECK_NOTHROW(s.validate());
    s.relaxation_delta = 0.0;  // neither route selected
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s.start_offset = 0.05;  // route b
    CHECK_NOTHROW(s.validate());
    s.relaxation_delta = 0.1;  // both selected
    CHECK_THROWS_AS(s.validate(), std::domain_error);
}

TEST_CASE("acceptance probability is positive and seed-stable") {
    const QuadrantBridgeSpec s = loop_spec(0.0, 0.3, 512);
    auto rate = [&](std::uint64_t seed) {
        long long attempts = 0;
        const int n = 150;
        for (int i = 0; i < n; ++i) {
            Rng rng(seed, RngModule::test, i);
            attempts += sample_quadrant_loop(s, rng).attempts;
        }
        return std::make_pair(n / double(attempts), attempts);
    };
    const auto [r1, a1] = rate(1);
    const auto [r2, a2] = rate(2);
    CHECK(r1 > 0.0);
    CHECK(r2 > 0.0);
    // binomial consistency across seeds (3 sigma)
    const double p = (r1 + r2) / 2.0;
    const double se = std::sqrt(p * (1 - p) * (1.0 / a1 + 1.0 / a2));
    CHECK(std::abs(r1 - r2) < 3.5 * se + 0.02 * p);
}

TEST_CASE("loops start and end exactly at the pinned points") {
    Rng rng(401, RngModule::test, 0);
    const QuadrantBridgeSpec s = loop_spec(0.5, 0.25, 256);
    const LoopSample loop = sample_quadrant_loop(s, rng);
    CHECK(loop.path.x(0) == 0.0);
    CHECK(loop.path.y(0) == 0.0);
    CHECK(loop.path.x(256) == 0.0);
    CHECK(loop.path.y(256) == 0.0);
    for (std::size_t i = 0; i <= 256; ++i) {
        CHECK(loop.path.x(i) >= -0.25);
        CHECK(loop.path.y(i) >= -0.25);
    }
}

TEST_CASE("interior positivity sharpens as delta shrinks") {
    const int n = 400;
    std::vector<double> fracs;
    for (double delta : {0.2, 0.1, 0.05}) {
        const QuadrantBridgeSpec s = loop_spec(0.5, delta, 256);
        int pos = 0;
        for (int i = 0; i < n; ++i) {
            Rng rng(402, RngModule::test,
                    static_cast<std::uint64_t>(delta * 1000) * 100000 + i);
            const LoopSample loop = sample_quadrant_loop(s, rng);
            bool all_pos = true;
            for (std::size_t k = 3; k + 3 < loop.path.size(); ++k)
                if (loop.path.x(k) <= 0.0 || loop.path.y(k) <= 0.0)
                    all_pos = false;
            pos += all_pos ? 1 : 0;
        }
        fracs.push_back(pos / double(n));
    }
    CHECK(fracs[2] > fracs[0] - 0.05);  // monotone within noise
    CHECK(fracs[2] > 0.55);             // tending to 1 as delta -> 0
}

TEST_CASE("acceptance rate is monotone in delta") {
    auto rate = [&](double delta) {
        const QuadrantBridgeSpec s = loop_spec(0.0, delta, 256);
        long long attempts = 0;
        const int n = 120;
        for (int i = 0; i < n; ++i) {
            Rng rng(403, RngModule::test, i);
            attempts += sample_quadrant_loop(s, rng).attempts;
        }
        return n / double(attempts);
    };
    const double r_big = rate(0.3);
    const double r_small = rate(0.12);
    CHECK(r_small < r_big * 1.15);
}

TEST_CASE("middle-segment resampling preserves endpoints and the window") {
    Rng rng(404, RngModule::test, 0);
    const QuadrantBridgeSpec s = loop_spec(0.5, 0.2, 256);
    const LoopSample loop = sample_quadrant_loop(s, rng);
    const SampledPath re = resample_middle_segment(loop.path, 0.25, 0.75, s, rng);
    const std::size_t is = 64, it = 192;
    CHECK(re.x(is) == loop.path.x(is));
    CHECK(re.y(it) == loop.path.y(it));
    CHECK(re.x(0) == 0.0);
    CHECK(re.x(256) == 0.0);
    for (std::size_t k = 0; k < is; ++k) CHECK(re.x(k) == loop.path.x(k));
    for (std::size_t k = it; k <= 256; ++k) CHECK(re.y(k) == loop.path.y(k));
    bool changed = false;
    for (std::size_t k = is + 1; k < it; ++k)
        if (re.x(k) != loop.path.x(k)) changed = true;
    CHECK(changed);

    // adjacent grid points: nothing to resample
    const SampledPath same =
        resample_middle_segment(loop.path, 0.5, 0.5 + 1.0 / 256, s, rng);
    CHECK(same.x(128) == loop.path.x(128));
}

TEST_CASE("gibbs invariance of the midpoint under resampling") {
    const QuadrantBridgeSpec s = loop_spec(0.5, 0.25, 256);
    const int n = 3000;
    std::vector<double> before(n), after(n);
    for (int i = 0; i < n; ++i) {
        Rng rng(405, RngModule::test, i);
        const LoopSample loop = sample_quadrant_loop(s, rng);
        before[i] = loop.path.x(128) + loop.path.y(128);
        const SampledPath re =
            resample_middle_segment(loop.path, 0.25, 0.75, s, rng);
        after[i] = re.x(128) + re.y(128);
    }
    CHECK(two_sample_ks(before, after).p_value > 0.01);
}

TEST_CASE("route a and route b approach a common law") {
    // Midpoint marginals from the barrier route and the offset route get
    // closer as the relaxation tightens.
    const int n = 1200;
    auto midpoints = [&](double delta, double offset, std::uint64_t seed) {
        QuadrantBridgeSpec s = loop_spec(0.5, delta, 192);
        s.start_offset = offset;
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) {
            Rng rng(seed, RngModule::test, i);
            const LoopSample loop = sample_quadrant_loop(s, rng);
            xs[i] = loop.path.x(96) + loop.path.y(96);
        }
        return xs;
    };
    const auto a_tight = midpoints(0.05, 0.0, 11);
    const auto b_tight = midpoints(0.0, 0.05, 12);
    const auto a_loose = midpoints(0.3, 0.0, 13);
    const auto b_loose = midpoints(0.0, 0.3, 14);
    const double d_tight = ks_distance(a_tight, b_tight);
    const double d_loose = ks_distance(a_loose, b_loose);
    CHECK(d_tight < d_loose + 0.02);
}

TEST_CASE("cone excursion endpoints carry the displacement") {
    Rng rng(406, RngModule::test, 0);
    const QuadrantBridgeSpec s = loop_spec(0.5, 0.2, 128);
    const LoopSample left =
        cone_excursion_as_loop(0.4, ConeOrientation::left, s, rng);
    CHECK(left.path.x(128) == 0.0);
    CHECK(left.path.y(128) == doctest::Approx(0.4));
    const LoopSample right =
        cone_excursion_as_loop(0.4, ConeOrientation::right, s, rng);
    CHECK(right.path.x(128) == doctest::Approx(0.4));
    CHECK(right.path.y(128) == 0.0);
    CHECK_THROWS_AS(
        cone_excursion_as_loop(-1.0, ConeOrientation::left, s, rng),
        std::domain_error);
}

TEST_CASE("time reversal symmetry of the loop") {
    // For endpoint (0,0) the law of (Z_{1-t}) equals that of Z_t with
    // coordinates swapped; compare Z_{1/4} against swapped Z_{3/4}.
    const QuadrantBridgeSpec s = loop_spec(0.5, 0.2, 256);
    const int n = 2500;
    std::vector<double> fwd(n), rev(n);
    for (int i = 0; i < n; ++i) {
        Rng rng(407, RngModule::test, i);
        const LoopSample loop = sample_quadrant_loop(s, rng);
        fwd[i] = loop.path.x(64);
        rev[i] = loop.path.y(192);
    }
    CHECK(two_sample_ks(fwd, rev).p_value > 0.01);
}

TEST_CASE("wedge map") {
    const WedgeMap id = WedgeMap::make(0.0);
    CHECK(id.lambda[0][0] == doctest::Approx(1.0));
    CHECK(id.lambda[1][0] == doctest::Approx(0.0));
    CHECK(id.lambda[1][1] == doctest::Approx(1.0));
    CHECK(id.zeta == doctest::Approx(2.0));

    const WedgeMap w = WedgeMap::make(0.5);
    CHECK(w.theta == doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-12));
    // Images of the quadrant boundary rays span arccos(-alpha).
    const double ex[2] = {w.lambda[0][0], w.lambda[1][0]};
    const double ey[2] = {w.lambda[0][1], w.lambda[1][1]};
    const double dot = ex[0] * ey[0] + ex[1] * ey[1];
    const double na = std::hypot(ex[0], ex[1]), nb = std::hypot(ey[0], ey[1]);
    CHECK(std::acos(dot / (na * nb)) ==
          doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-9));

    // Transformed increments have identity covariance.
    Rng rng(408, RngModule::test, 0);
    const SampledPath path = sample_correlated_bm_alpha(0.5, 1.0, 1'000'000, rng);
    const SampledPath std_path = wedge_transform(path, w);
    std::vector<double> dx(std_path.size() - 1), dy(std_path.size() - 1);
    const double sd = std::sqrt(1.0 / 1'000'000);
    double vx = 0, vy = 0;
    for (std::size_t i = 1; i < std_path.size(); ++i) {
        dx[i - 1] = (std_path.x(i) - std_path.x(i - 1)) / sd;
        dy[i - 1] = (std_path.y(i) - std_path.y(i - 1)) / sd;
        vx += dx[i - 1] * dx[i - 1];
        vy += dy[i - 1] * dy[i - 1];
    }
    CHECK(std::abs(correlation_of(dx, dy)) < 3e-3);
    CHECK(vx / dx.size() == doctest::Approx(1.0).epsilon(0.005));
    CHECK(vy / dy.size() == doctest::Approx(1.0).epsilon(0.005));

    CHECK_THROWS_AS(WedgeMap::make(1.0), std::domain_error);
}

TEST_CASE("E_k estimates decay") {
    EkConfig cfg;
    cfg.threads = 2;
    const auto rows = estimate_ek_probability(0.0, {2, 4, 8}, 12000, 409, cfg);
    REQUIRE(rows.size() == 3);
    std::vector<double> p, se;
    for (const auto& r : rows) {
        CHECK(r.p_hat > 0.0);
        p.push_back(r.p_hat);
        se.push_back(r.stderr_);
    }
    CHECK(isotonic_decreasing(p, se));
    // log-log slope below -1
    const double slope = std::log(p[2] / p[0]) / std::log(4.0);
    CHECK(slope < -1.0);
}

TEST_SUITE_END();
