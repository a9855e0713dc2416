#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "lqg/params.hpp"
#include "lqg/rng.hpp"

using namespace lqg;

TEST_SUITE_BEGIN("params");

TEST_CASE("coupled constants at the named couplings") {
    // gamma = sqrt(2): correlation -cos(pi/2) = 0.
    const GammaParams p2 = make_params(std::sqrt(2.0));
    CHECK(p2.bm_correlation == doctest::Approx(0.0).epsilon(1e-14));

    // gamma = sqrt(8/3): correlation 1/2, Q = 5/sqrt(6).
    const GammaParams p83 = make_params(gamma_sqrt83());
    CHECK(p83.bm_correlation == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(p83.q_charge == doctest::Approx(5.0 / std::sqrt(6.0)).epsilon(1e-13));
    CHECK(p83.q_charge == doctest::Approx(2.041241452).epsilon(1e-8));

    // gamma -> 2^-: Q -> 2^+.
    const GammaParams near2 = make_params(2.0 - 1e-9);
    CHECK(near2.q_charge > 2.0);
    CHECK(near2.q_charge == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("invariants across the gamma range") {
    for (double g = 0.05; g < 2.0; g += 0.0137) {
        const GammaParams p = make_params(g);
        CHECK(p.kappa == doctest::Approx(g * g));
        CHECK(p.kappa > 0.0);
        CHECK(p.kappa < 4.0);
        CHECK(p.kappa_prime > 4.0);
        CHECK(p.kappa * p.kappa_prime == doctest::Approx(16.0).epsilon(1e-13));
        CHECK(p.q_charge > 2.0);
        CHECK(p.bm_correlation > -1.0);
        CHECK(p.bm_correlation < 1.0);
        CHECK((p.bm_correlation >= 0.0) == (g >= std::sqrt(2.0) - 1e-12));
    }
}

TEST_CASE("rejects out-of-range gamma") {
    CHECK_THROWS_AS(make_params(0.0), std::domain_error);
    CHECK_THROWS_AS(make_params(2.0), std::domain_error);
    CHECK_THROWS_AS(make_params(-1.0), std::domain_error);
    CHECK_THROWS_AS(make_params(2.7), std::domain_error);
}

TEST_CASE("bessel dimensions") {
    const GammaParams p = make_params(gamma_sqrt83());
    const BesselDimensions d = bessel_dimensions(p);
    CHECK(d.sphere_dim == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(d.disk_dim == doctest::Approx(1.5).epsilon(1e-13));
    // gamma-cone dimension at weight gamma is 8/gamma^2 = 3.
    CHECK(d.cone_dim(p.gamma) == doctest::Approx(3.0).epsilon(1e-12));
    for (double a = -1.0; a < p.q_charge; a += 0.1)
        CHECK(d.cone_dim(a) > 2.0);
}

TEST_CASE("scaling action examples") {
    const GammaParams p = make_params(gamma_sqrt83());
    // C = 0 is the identity on every tag.
    for (ScaledQuantity t : {ScaledQuantity::area, ScaledQuantity::boundary,
                             ScaledQuantity::natural_time})
        CHECK(apply_scaling({0.0}, t, 3.7, p) == doctest::Approx(3.7));

    const double c = 2.0 / p.gamma * std::log(2.0);
    CHECK(apply_scaling({c}, ScaledQuantity::area, 1.0, p) ==
          doctest::Approx(4.0).epsilon(1e-13));
    CHECK(apply_scaling({c}, ScaledQuantity::natural_time, 1.0, p) ==
          doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-13));

    // natural_time demands gamma = sqrt(8/3).
    const GammaParams other = make_params(1.5);
    CHECK_THROWS_AS(
        apply_scaling({1.0}, ScaledQuantity::natural_time, 1.0, other),
        std::invalid_argument);
}

TEST_CASE("scaling group laws") {
    Rng rng(2024, RngModule::test, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const double g = rng.uniform(0.05, 1.95);
        const GammaParams p = make_params(g);
        const double c1 = rng.uniform(-3.0, 3.0);
        const double c2 = rng.uniform(-3.0, 3.0);
        CHECK(area_factor(p, c1) * area_factor(p, c2) ==
              doctest::Approx(area_factor(p, c1 + c2)).epsilon(1e-12));
        CHECK(boundary_factor(p, c1) * boundary_factor(p, c1) ==
              doctest::Approx(area_factor(p, c1)).epsilon(1e-12));
    }
    const GammaParams p = make_params(gamma_sqrt83());
    for (double c : {-2.2, -0.4, 0.9, 3.1}) {
        CHECK(std::pow(natural_time_factor(p, c), 4.0) ==
              doctest::Approx(std::pow(boundary_factor(p, c), 6.0))
                  .epsilon(1e-12));
    }
}

TEST_SUITE_END();
