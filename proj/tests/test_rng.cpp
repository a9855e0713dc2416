#include <doctest.h>

#include <cmath>
#include <vector>

#include "lqg/rng.hpp"

using namespace lqg;

TEST_SUITE_BEGIN("rng");

TEST_CASE("streams are reproducible and task-separated") {
    Rng a(123, RngModule::stable, 7);
    Rng b(123, RngModule::stable, 7);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c(123, RngModule::stable, 8);
    Rng d(123, RngModule::bessel, 7);
    int same_c = 0, same_d = 0;
    Rng a2(123, RngModule::stable, 7);
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t v = a2.next_u64();
        if (v == c.next_u64()) ++same_c;
        if (v == d.next_u64()) ++same_d;
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("fork gives fresh independent substreams") {
    Rng parent(55, RngModule::sphere, 3);
    Rng f1 = parent.fork(1);
    Rng f2 = parent.fork(2);
    Rng f1b = parent.fork(1);
    CHECK(f1.next_u64() == f1b.next_u64());
    CHECK(f1.next_u64() != f2.next_u64());
}

TEST_CASE("uniform lands strictly inside (0,1)") {
    Rng rng(9, RngModule::test, 0);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(lo < 1e-4);
    CHECK(hi > 1.0 - 1e-4);
}

TEST_CASE("normal moments") {
    Rng rng(10, RngModule::test, 0);
    const int n = 1'000'000;
    double s1 = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(std::abs(s1 / n) < 4.0 / std::sqrt((double)n));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("gamma and poisson match their first two moments") {
    Rng rng(11, RngModule::test, 0);
    for (double shape : {0.4, 1.0, 2.6, 17.0}) {
        const int n = 300000;
        double m = 0, v = 0;
        for (int i = 0; i < n; ++i) {
            const double g = rng.gamma(shape);
            m += g;
            v += g * g;
        }
        m /= n;
        v = v / n - m * m;
        CHECK(m == doctest::Approx(shape).epsilon(0.02));
        CHECK(v == doctest::Approx(shape).epsilon(0.04));
    }
    for (double mean : {0.3, 4.0, 35.0, 4000.0}) {
        const int n = 200000;
        double m = 0, v = 0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            m += k;
            v += k * k;
        }
        m /= n;
        v = v / n - m * m;
        CHECK(m == doctest::Approx(mean).epsilon(0.02));
        CHECK(v == doctest::Approx(mean).epsilon(0.05));
    }
}

TEST_CASE("exponential mean and coin fairness") {
    Rng rng(12, RngModule::test, 0);
    const int n = 400000;
    double m = 0;
    long long heads = 0;
    for (int i = 0; i < n; ++i) {
        m += rng.exponential();
        heads += rng.coin() ? 1 : 0;
    }
    CHECK(m / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(heads - n / 2.0) < 3.0 * std::sqrt(n / 4.0));
}

TEST_SUITE_END();
