#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>
#include <vector>

#include "lqg/bessel.hpp"
#include "lqg/field.hpp"
#include "lqg/params.hpp"
#include "lqg/rng.hpp"
#include "lqg/stats.hpp"

using namespace lqg;

TEST_SUITE_BEGIN("field");

TEST_CASE("lateral part has zero theta-mean identically") {
    Rng rng(600, RngModule::test, 0);
    const CylinderField f = sample_h2_cylinder(0.0, 6.0, 64, 32, 12, rng);
    for (int i = 0; i < f.n_x; ++i) {
        double mean = 0.0;
        for (int j = 0; j < f.n_theta; ++j) mean += f.at(i, j);
        CHECK(std::abs(mean / f.n_theta) < 1e-10);
    }
}

TEST_CASE("mode variance and x-decorrelation match the analytic law") {
    // Oracle: stationary Gauss-Markov with var 1/(2n), corr e^{-n dx}.
    Rng rng(601, RngModule::test, 0);
    const int reps = 6000, n_x = 48;
    const double span = 6.0;
    double v2 = 0, c2 = 0, v5 = 0;
    const int lag = 8;  // x-lag = 1.0
    for (int r = 0; r < reps; ++r) {
        const CylinderField f = sample_h2_cylinder(0.0, span, n_x, 8, 6, rng);
        const double a0 = f.mode_cos[1 * n_x + 4];
        const double a1 = f.mode_cos[1 * n_x + 4 + lag];
        v2 += a0 * a0;
        c2 += a0 * a1;
        const double b0 = f.mode_cos[4 * n_x + 10];
        v5 += b0 * b0;
    }
    v2 /= reps;
    c2 /= reps;
    v5 /= reps;
    const double se2 = 0.25 * std::sqrt(2.0 / reps);
    CHECK(std::abs(v2 - 0.25) < 3.5 * se2);
    CHECK(std::abs(v5 - 0.1) < 3.5 * 0.1 * std::sqrt(2.0 / reps));
    const double expect_corr = std::exp(-2.0 * 1.0);
    CHECK(std::abs(c2 / v2 - expect_corr) < 0.05);
}

TEST_CASE("strip part uses cosine modes only") {
    Rng rng(602, RngModule::test, 0);
    const CylinderField f = sample_h2_strip(0.0, 4.0, 32, 16, 6, rng);
    CHECK(f.mode_sin.empty());
    CHECK(f.geometry == Geometry::strip);
}

TEST_CASE("h1 is Dirichlet-orthogonal to every lateral mode") {
    Rng rng(603, RngModule::test, 0);
    CylinderField f = sample_h2_cylinder(0.0, 5.0, 48, 24, 8, rng);
    // give h1 a nontrivial profile, then split the two parts
    CylinderField h1_only = f, mode_only = f;
    for (int i = 0; i < f.n_x; ++i)
        h1_only.h1_profile[i] = std::sin(0.7 * i) + 0.2 * i;
    std::fill(h1_only.mode_cos.begin(), h1_only.mode_cos.end(), 0.0);
    std::fill(h1_only.mode_sin.begin(), h1_only.mode_sin.end(), 0.0);
    h1_only.rebuild_total();
    std::fill(mode_only.h1_profile.begin(), mode_only.h1_profile.end(), 0.0);
    mode_only.rebuild_total();
    CHECK(std::abs(dirichlet_inner(h1_only, mode_only)) < 1e-8);
}

TEST_CASE("area measure of flat fields") {
    const GammaParams p = make_params(gamma_sqrt83());
    CylinderField f;
    f.geometry = Geometry::cylinder;
    f.x_min = 0.0;
    f.x_max = 4.0;
    f.n_x = 64;
    f.n_theta = 32;
    f.n_modes = 0;
    f.h1_profile.assign(64, 0.0);
    f.total.assign(64 * 32, 0.0);

    const double eps = 0.5;
    const QuantumMeasureGrid g = compute_area_measure(f, eps, p);
    const double expect = std::pow(eps, 0.5 * p.kappa) * 4.0 * 2.0 * M_PI;
    CHECK(g.total() == doctest::Approx(expect).epsilon(1e-12));

    // adding C multiplies every cell by exactly e^{gamma C}
    CylinderField fc = f;
    fc.add_constant(0.8);
    const QuantumMeasureGrid gc = compute_area_measure(fc, eps, p);
    const double factor = std::exp(p.gamma * 0.8);
    for (std::size_t k = 0; k < g.cell_mass.size(); ++k)
        CHECK(gc.cell_mass[k] ==
              doctest::Approx(g.cell_mass[k] * factor).epsilon(1e-12));

    // countable additivity on the grid
    double half1 = 0, half2 = 0;
    for (std::size_t k = 0; k < g.cell_mass.size(); ++k)
        (k % 2 ? half1 : half2) += g.cell_mass[k];
    CHECK(half1 + half2 == doctest::Approx(g.total()).epsilon(1e-12));

    CHECK_THROWS_AS(compute_area_measure(f, 0.05, p), std::domain_error);
}

TEST_CASE("dyadic epsilon stability on a smooth field") {
    const GammaParams p = make_params(gamma_sqrt83());
    CylinderField f;
    f.geometry = Geometry::cylinder;
    f.x_min = 0.0;
    f.x_max = 8.0;
    f.n_x = 128;
    f.n_theta = 64;
    f.n_modes = 0;
    f.h1_profile.assign(128, 0.0);
    f.total.resize(128 * 64);
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 64; ++j)
            f.total[i * 64 + j] =
                std::cos(0.5 * f.cell_x(i)) + 0.3 * std::sin(f.cell_theta(j));
    const double a1 = compute_area_measure(f, 0.8, p).total();
    const double a2 = compute_area_measure(f, 0.4, p).total();
    // epsilon^{kappa/2} normalization removed before comparing shapes
    const double n1 = a1 / std::pow(0.8, 0.5 * p.kappa);
    const double n2 = a2 / std::pow(0.4, 0.5 * p.kappa);
    CHECK(std::abs(n1 / n2 - 1.0) < 0.10);
}

TEST_CASE("sphere field assembly has unit-rate quadratic variation") {
    Rng rng(604, RngModule::test, 0);
    const GammaParams p = make_params(gamma_sqrt83());
    SphereFieldConfig cfg;
    cfg.n_x = 256;
    cfg.n_theta = 16;
    cfg.n_modes = 4;
    double qv_ratio_sum = 0.0;
    int got = 0;
    for (int rep = 0; rep < 40; ++rep) {
        const BesselExcursion exc = sample_bessel_excursion(
            1.0, ExcursionTruncation::by_max(0.5, 0.1, 20.0), 1 << 14, rng);
        double span = 0.0;
        std::vector<double> h1;
        try {
            h1 = sphere_h1_profile(p, exc, cfg, &span);
        } catch (const std::domain_error&) {
            continue;
        }
        double qv = 0.0;
        for (std::size_t i = 1; i < h1.size(); ++i)
            qv += (h1[i] - h1[i - 1]) * (h1[i] - h1[i - 1]);
        qv_ratio_sum += qv / span;
        ++got;
    }
    REQUIRE(got > 30);
    CHECK(qv_ratio_sum / got == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("assemble_sphere_field combines h1 with the lateral part") {
    Rng rng(605, RngModule::test, 0);
    const GammaParams p = make_params(gamma_sqrt83());
    SphereFieldConfig cfg;
    cfg.n_x = 96;
    cfg.n_theta = 24;
    cfg.n_modes = 6;
    const BesselExcursion exc = sample_bessel_excursion(
        1.0, ExcursionTruncation::by_max(0.5, 0.1, 20.0), 1 << 13, rng);
    double span = 0.0;
    sphere_h1_profile(p, exc, cfg, &span);
    CylinderField h2 =
        sample_h2_cylinder(0.0, span, cfg.n_x, cfg.n_theta, cfg.n_modes, rng);
    const CylinderField f = assemble_sphere_field(p, exc, h2, cfg);
    CHECK(f.x_max == doctest::Approx(span));
    // theta-average equals h1 exactly
    for (int i = 0; i < f.n_x; i += 7) {
        double m = 0;
        for (int j = 0; j < f.n_theta; ++j) m += f.at(i, j);
        CHECK(m / f.n_theta == doctest::Approx(f.h1_profile[i]).epsilon(1e-10));
    }
    // degenerate lateral part: zero modes give a rotationally symmetric
    // measure, exactly uniform in theta
    CylinderField flat = h2;
    std::fill(flat.mode_cos.begin(), flat.mode_cos.end(), 0.0);
    std::fill(flat.mode_sin.begin(), flat.mode_sin.end(), 0.0);
    const CylinderField f0 = assemble_sphere_field(p, exc, flat, cfg);
    const QuantumMeasureGrid g =
        compute_area_measure(f0, 3.0 * std::max(f0.dx(), f0.dtheta()), p);
    for (int i = 0; i < f0.n_x; i += 11) {
        const double first = g.cell_mass[i * f0.n_theta];
        for (int j = 1; j < f0.n_theta; ++j)
            CHECK(g.cell_mass[i * f0.n_theta + j] ==
                  doctest::Approx(first).epsilon(1e-9));
    }
    // grid mismatch is rejected
    CylinderField wrong =
        sample_h2_cylinder(0.0, span, cfg.n_x + 8, cfg.n_theta, 4, rng);
    CHECK_THROWS_AS(assemble_sphere_field(p, exc, wrong, cfg),
                    std::invalid_argument);
}

TEST_CASE("boundary measure scales with the half exponent") {
    Rng rng(606, RngModule::test, 0);
    const GammaParams p = make_params(gamma_sqrt83());
    CylinderField f = sample_h2_strip(0.0, 4.0, 64, 32, 8, rng);
    for (int i = 0; i < f.n_x; ++i) f.h1_profile[i] = -0.02 * (i - 32.0) * (i - 32.0) / 32.0;
    f.rebuild_total();
    const double eps = 0.4;
    const BoundaryMeasure b0 = compute_boundary_measure(f, eps, p);
    CylinderField fc = f;
    fc.add_constant(1.1);
    const BoundaryMeasure b1 = compute_boundary_measure(fc, eps, p);
    CHECK(b1.total() == doctest::Approx(b0.total() *
                                        boundary_factor(p, 1.1))
                            .epsilon(1e-10));
    CHECK(b0.total() > 0.0);
    // cylinder geometry has no boundary
    const CylinderField cyl = sample_h2_cylinder(0.0, 4.0, 64, 32, 4, rng);
    CHECK_THROWS_AS(compute_boundary_measure(cyl, eps, p),
                    std::invalid_argument);
}

TEST_CASE("coordinate change identity, translation, psi far-field") {
    Rng rng(607, RngModule::test, 0);
    const GammaParams p = make_params(gamma_sqrt83());
    CylinderField f = sample_h2_cylinder(0.0, 12.0, 256, 64, 16, rng);
    for (int i = 0; i < f.n_x; ++i)
        f.h1_profile[i] = -0.05 * (f.cell_x(i) - 6.0) * (f.cell_x(i) - 6.0);
    f.rebuild_total();
    const double eps = 0.6;

    const auto ident =
        coordinate_change_check(f, CylinderMap::identity(), 3.0, 9.0, eps, p);
    CHECK(ident.rel_discrepancy <= 1e-10);

    // translation by an exact grid multiple: mass shifts exactly
    const double c = 32 * f.dx();
    const auto trans =
        coordinate_change_check(f, CylinderMap::translation(c), 3.0, 7.0, eps, p);
    CHECK(trans.rel_discrepancy <= 1e-9);

    // psi_z with z far to the right of the region
    const auto psi = coordinate_change_check(
        f, CylinderMap::psi({10.5, 1.0}), 1.0, 4.0, eps, p);
    CHECK(psi.rel_discrepancy < 0.10);

    // region touching the singularity is rejected
    CHECK_THROWS_AS(coordinate_change_check(f, CylinderMap::psi({3.5, 1.0}),
                                            1.0, 4.0, eps, p),
                    std::domain_error);
}

TEST_CASE("distortion bound for hull-removal maps") {
    std::vector<std::complex<double>> probes;
    for (double x = 2.0; x <= 10.0; x += 0.5)
        probes.push_back({x, 0.7 * x});
    const auto rows = distortion_bound_check({0.0, 2.0}, probes);
    REQUIRE(rows.size() == probes.size());
    double prev = 1e18;
    for (const auto& r : rows) {
        CHECK(r.displacement <= r.bound * (1.0 + 1e-9));
        CHECK(r.displacement < prev);  // monotone decay along the ray
        prev = r.displacement;
    }
    // far probe: w = z + 14 has displacement below 1e-6
    const auto far = distortion_bound_check({0.0, 0.0}, {{14.0, 0.0}, {2.0, 0.0}});
    for (const auto& r : far)
        if (r.w.real() > 13.0) CHECK(r.displacement < 1e-6);

    // psi_z closed form: |psi_z(w) - w| decays like e^{Re w - Re z}
    const CylinderMap psi = CylinderMap::psi({8.0, 0.5});
    double prev_ratio = -1.0;
    for (double x : {1.0, 2.0, 3.0, 4.0}) {
        const std::complex<double> w{x, 0.2};
        const double disp = std::abs(psi.apply(w) - w);
        const double ratio = disp / std::exp(x - 8.0);
        CHECK(ratio > 0.5);
        CHECK(ratio < 2.0);
        if (prev_ratio > 0) CHECK(std::abs(ratio - prev_ratio) < 0.5);
        prev_ratio = ratio;
    }
}

TEST_CASE("binary round trip is bit exact") {
    Rng rng(608, RngModule::test, 0);
    CylinderField f = sample_h2_cylinder(-1.0, 3.0, 32, 16, 5, rng);
    for (int i = 0; i < f.n_x; ++i) f.h1_profile[i] = rng.normal();
    f.rebuild_total();
    std::stringstream ss;
    f.save_binary(ss);
    const CylinderField g = CylinderField::load_binary(ss);
    CHECK(g.n_x == f.n_x);
    CHECK(g.n_theta == f.n_theta);
    CHECK(g.x_min == f.x_min);
    CHECK(g.x_max == f.x_max);
    REQUIRE(g.total.size() == f.total.size());
    for (std::size_t k = 0; k < f.total.size(); ++k)
        CHECK(g.total[k] == f.total[k]);
    for (std::size_t k = 0; k < f.mode_cos.size(); ++k)
        CHECK(g.mode_cos[k] == f.mode_cos[k]);
}

TEST_SUITE_END();
