#include "lqg/spheres.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/parallel.hpp"

namespace lqg {

namespace {

double pick_epsilon(const CylinderField& field, double epsilon_cells,
                    double epsilon_abs) {
    return epsilon_abs > 0.0
               ? epsilon_abs
               : epsilon_cells * std::max(field.dx(), field.dtheta());
}

double measured_area(const CylinderField& field, double epsilon_cells,
                     double epsilon_abs, const GammaParams& params,
                     QuantumMeasureGrid* grid_out) {
    const double eps = pick_epsilon(field, epsilon_cells, epsilon_abs);
    QuantumMeasureGrid g = compute_area_measure(field, eps, params);
    const double a = g.total();
    if (grid_out) *grid_out = std::move(g);
    return a;
}

}  // namespace

SphereSample sample_sphere_bessel(const GammaParams& params,
                                  const SphereBesselConfig& cfg, Rng& rng) {
    const BesselDimensions dims = bessel_dimensions(params);
    const ExcursionTruncation trunc =
        ExcursionTruncation::by_max(cfg.min_max, cfg.t_lo, cfg.t_hi);
    for (long long attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        BesselExcursion exc = sample_bessel_excursion(
            dims.sphere_dim, trunc, cfg.excursion_steps, rng);
        double span = 0.0;
        std::vector<double> h1;
        try {
            h1 = sphere_h1_profile(params, exc, cfg.field, &span);
        } catch (const std::domain_error&) {
            continue;  // too little mass above the height floor
        }
        if (cfg.epsilon_abs > 0.0 &&
            2.0 * span / cfg.field.n_x > cfg.epsilon_abs)
            continue;  // window too long for the fixed regularization radius
        double h1_area = 0.0;
        const double dxs = span / cfg.field.n_x;
        for (double v : h1) h1_area += std::exp(params.gamma * v) * dxs;
        const double est = h1_area * 2.0 * M_PI * cfg.screen_factor;
        if (est * cfg.screen_slack < cfg.area_lo ||
            est / cfg.screen_slack > cfg.area_hi)
            continue;
        CylinderField f = sample_h2_cylinder(0.0, span, cfg.field.n_x,
                                             cfg.field.n_theta,
                                             cfg.field.n_modes, rng);
        f.h1_profile = std::move(h1);
        f.rebuild_total();
        const double area =
            measured_area(f, cfg.epsilon_cells, cfg.epsilon_abs, params, nullptr);
        if (area < cfg.area_lo || area > cfg.area_hi) continue;
        SphereSample s;
        s.raw_area = area;
        s.provenance = SphereProvenance::bessel;
        s.attempts = attempt;
        if (cfg.unit_shift) {
            const double shift = -std::log(area) / params.gamma;
            f.add_constant(shift);
            s.area = 1.0;
        } else {
            s.area = area;
        }
        s.field = std::move(f);
        return s;
    }
    throw std::runtime_error(
        "sample_sphere_bessel: acceptance budget exhausted (area window too "
        "tight for the chosen truncation)");
}

SphereSample sample_sphere_bottleneck(const GammaParams& params,
                                      const SphereBottleneckConfig& cfg,
                                      Rng& rng) {
    if (!(cfg.r < 0.0))
        throw std::domain_error("sample_sphere_bottleneck: r must be < 0");
    const double drift = params.q_charge - params.gamma;
    if (!(drift > 0.0))
        throw std::domain_error("sample_sphere_bottleneck: needs Q > gamma");
    const double climb_level = 0.5 * cfg.r;  // gamma^-1 log beta^-1, beta = e^{gamma r/2}
    const double floor_h1 = -cfg.field.height_floor_mult / params.gamma;
    const double dv = cfg.profile_dv;
    const double sd = std::sqrt(dv);

    std::vector<double> prof;
    for (long long attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        // H1 right of tau_r: drifted BM from r, run to the height floor.
        prof.clear();
        prof.push_back(cfg.r);
        double x = cfg.r;
        double sup = cfg.r;
        double h1_area = std::exp(params.gamma * cfg.r) * dv;
        while (x > floor_h1) {
            x += -drift * dv + sd * rng.normal();
            prof.push_back(x);
            sup = std::max(sup, x);
            h1_area += std::exp(params.gamma * x) * dv;
            if (prof.size() > 4'000'000)
                throw std::runtime_error("bottleneck profile runaway");
        }
        if (sup < climb_level) continue;  // beta conditioning
        // Cheap stage-1 screen on the lateral-free area.
        const double est = h1_area * 2.0 * M_PI * cfg.screen_factor;
        if (est * cfg.screen_slack < 1.0 || est / cfg.screen_slack > 1.0 + cfg.epsilon)
            continue;

        // Materialize: resample profile on the field grid, add H2.
        const double span = (prof.size() - 1) * dv;
        if (cfg.epsilon_abs > 0.0 &&
            2.0 * span / cfg.field.n_x > cfg.epsilon_abs)
            continue;  // window too long for the fixed regularization radius
        CylinderField f = sample_h2_cylinder(0.0, span, cfg.field.n_x,
                                             cfg.field.n_theta,
                                             cfg.field.n_modes, rng);
        f.h1_profile.resize(cfg.field.n_x);
        for (int i = 0; i < cfg.field.n_x; ++i) {
            const double u = (i + 0.5) * span / cfg.field.n_x / dv;
            const std::size_t k =
                std::min(static_cast<std::size_t>(u), prof.size() - 2);
            const double w = u - k;
            f.h1_profile[i] = prof[k] * (1.0 - w) + prof[k + 1] * w;
        }
        f.rebuild_total();
        const double area =
            measured_area(f, cfg.epsilon_cells, cfg.epsilon_abs, params, nullptr);
        if (area < 1.0 || area > 1.0 + cfg.epsilon) continue;
        SphereSample s;
        s.raw_area = area;
        s.provenance = SphereProvenance::bottleneck;
        s.attempts = attempt;
        if (cfg.unit_shift) {
            f.add_constant(-std::log(area) / params.gamma);
            s.area = 1.0;
        } else {
            s.area = area;
        }
        s.field = std::move(f);
        return s;
    }
    throw std::runtime_error(
        "sample_sphere_bottleneck: acceptance budget exhausted");
}

DiskSample sample_quantum_disk(const GammaParams& params, const DiskConfig& cfg,
                               Rng& rng) {
    const BesselDimensions dims = bessel_dimensions(params);
    if (!(dims.disk_dim < 2.0))
        throw std::domain_error("sample_quantum_disk: disk dimension >= 2");
    const ExcursionTruncation trunc =
        ExcursionTruncation::by_max(cfg.min_max, cfg.t_lo, cfg.t_hi);
    SphereFieldConfig fcfg;
    fcfg.n_x = cfg.n_x;
    fcfg.n_theta = cfg.n_theta;
    fcfg.n_modes = cfg.n_modes;
    fcfg.height_floor_mult = cfg.height_floor_mult;

    for (long long attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        BesselExcursion exc = sample_bessel_excursion(
            dims.disk_dim, trunc, cfg.excursion_steps, rng);
        double span = 0.0;
        std::vector<double> h1;
        try {
            h1 = h1_profile_from_excursion(params, exc, fcfg, 2.0, &span);
        } catch (const std::domain_error&) {
            continue;
        }
        CylinderField f =
            sample_h2_strip(0.0, span, cfg.n_x, cfg.n_theta, cfg.n_modes, rng);
        f.h1_profile = std::move(h1);
        f.rebuild_total();
        const double eps = cfg.epsilon_cells * std::max(f.dx(), f.dtheta());
        const BoundaryMeasure bm = compute_boundary_measure(f, eps, params);
        double boundary = bm.total();
        double area = compute_area_measure(f, eps, params).total();

        // Constraint by exact shift (boundary scales e^{gamma C/2}, area
        // e^{gamma C}).
        double shift = 0.0;
        if (cfg.constraint == DiskConstraint::unit_boundary)
            shift = -2.0 / params.gamma * std::log(boundary);
        else if (cfg.constraint == DiskConstraint::boundary_length)
            shift = 2.0 / params.gamma * std::log(cfg.boundary_length / boundary);
        else
            shift = -std::log(area) / params.gamma;
        f.add_constant(shift);
        boundary *= boundary_factor(params, shift);
        area *= area_factor(params, shift);

        DiskSample d;
        d.boundary_length = boundary;
        d.area = area;
        d.attempts = attempt;
        // Marked point uniform in boundary mass (mass ratios are
        // shift-invariant, so the pre-shift measure serves).
        const double target = rng.uniform() * bm.total();
        double acc = 0.0;
        double pos = 0.0;
        for (std::size_t i = 0; i < bm.edge_mass.size(); ++i) {
            acc += bm.edge_mass[i];
            if (acc >= target) {
                pos = static_cast<double>(i) /
                      static_cast<double>(bm.edge_mass.size());
                break;
            }
        }
        d.marked_boundary_point = pos;
        d.field = std::move(f);
        return d;
    }
    throw std::runtime_error("sample_quantum_disk: retry budget exhausted");
}

DiskAreaBank::DiskAreaBank(const GammaParams& params, const DiskConfig& cfg,
                           int n_disks, std::uint64_t seed, int threads) {
    DiskConfig unit = cfg;
    unit.constraint = DiskConstraint::unit_boundary;
    areas_.assign(n_disks, 0.0);
    parallel_for(static_cast<std::size_t>(n_disks), threads, [&](std::size_t i) {
        Rng rng(seed, RngModule::sphere, 0x0D15C000ull + i);
        areas_[i] = sample_quantum_disk(params, unit, rng).area;
    });
    double m = 0.0;
    for (double a : areas_) m += a;
    mean_ = m / std::max<std::size_t>(areas_.size(), 1);
}

double DiskAreaBank::draw(Rng& rng) const {
    const std::size_t i =
        static_cast<std::size_t>(rng.uniform() * areas_.size()) % areas_.size();
    return areas_[i];
}

LevySphereSample assemble_levy_sphere(const GammaParams& params,
                                      const LevySphereConfig& cfg,
                                      const StableModel& model,
                                      const DiskAreaBank& bank, Rng& rng) {
    if (std::abs(params.gamma - gamma_sqrt83()) > 1e-9)
        throw std::domain_error("assemble_levy_sphere: gamma must be sqrt(8/3)");
    if (std::abs(model.alpha() - 1.5) > 1e-12)
        throw std::domain_error("assemble_levy_sphere: alpha must be 3/2");
    if (cfg.materialize == DiskMaterialize::all_above && cfg.all_above <= 0.0)
        throw std::domain_error(
            "assemble_levy_sphere: all_above threshold below grid resolution");

    LevySphereSample out;
    out.excursion = sample_stable_excursion(model, cfg.excursion_truncation,
                                            cfg.excursion_steps, rng,
                                            cfg.jump_threshold_mult);
    const auto& jumps = out.excursion.jumps;

    // Which jumps get a materialized field.
    std::vector<char> materialize(jumps.size(), 0);
    if (cfg.materialize == DiskMaterialize::top_k && cfg.top_k > 0) {
        std::vector<std::size_t> order(jumps.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return jumps[a].size > jumps[b].size;
        });
        for (std::size_t r = 0;
             r < std::min<std::size_t>(cfg.top_k, order.size()); ++r)
            materialize[order[r]] = 1;
    } else if (cfg.materialize == DiskMaterialize::all_above) {
        for (std::size_t i = 0; i < jumps.size(); ++i)
            materialize[i] = jumps[i].size >= cfg.all_above ? 1 : 0;
    }

    double total = 0.0;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        DiskDecoration dec;
        dec.time = jumps[i].time;
        dec.boundary_length = jumps[i].size;
        dec.clockwise = rng.coin();
        dec.marked_point = rng.uniform() * jumps[i].size;
        const double l2 = jumps[i].size * jumps[i].size;
        if (materialize[i]) {
            DiskConfig dc = cfg.disk;
            dc.constraint = DiskConstraint::boundary_length;
            dc.boundary_length = jumps[i].size;
            Rng disk_rng = rng.fork(0xD15Cull + i);
            dec.disk = sample_quantum_disk(params, dc, disk_rng);
            dec.area = dec.disk->area;
            dec.materialized = true;
        } else {
            dec.area = l2 * bank.draw(rng);
        }
        total += dec.area;
        out.decorations.push_back(std::move(dec));
    }
    if (cfg.small_jump_completion) {
        // Mean area carried by sub-threshold jumps: intensity c u^{-5/2},
        // disk area L^2 * E[A1], integrated below the recording threshold.
        const double thr =
            cfg.jump_threshold_mult *
            std::pow(out.excursion.duration / cfg.excursion_steps, 2.0 / 3.0);
        out.small_jump_area = levy_jump_constant(1.5) *
                              out.excursion.duration * 2.0 * std::sqrt(thr) *
                              bank.mean();
        total += out.small_jump_area;
    }
    out.total_area = total;
    return out;
}

double sphere_marked_point_exponent(int k) {
    if (k < 0) throw std::domain_error("sphere_marked_point_exponent: k >= 0");
    return -3.5 + static_cast<double>(k);
}

double sphere_marked_point_weight(int k, double area) {
    return std::pow(area, sphere_marked_point_exponent(k));
}

ProfileObservable sphere_profile_observable(const CylinderField& field,
                                            const QuantumMeasureGrid& measure) {
    std::vector<double> col(field.n_x, 0.0);
    double total = 0.0;
    for (int i = 0; i < field.n_x; ++i) {
        double m = 0.0;
        for (int j = 0; j < field.n_theta; ++j)
            m += measure.cell_mass[i * field.n_theta + j];
        col[i] = m;
        total += m;
    }
    auto at_quant = [&](double q) {
        const double target = q * total;
        double acc = 0.0;
        for (int i = 0; i < field.n_x; ++i) {
            acc += col[i];
            if (acc >= target) return field.h1_profile[i];
        }
        return field.h1_profile[field.n_x - 1];
    };
    ProfileObservable o;
    o.at_q25 = at_quant(0.25);
    o.at_q50 = at_quant(0.50);
    o.at_q75 = at_quant(0.75);
    return o;
}

}  // namespace lqg
