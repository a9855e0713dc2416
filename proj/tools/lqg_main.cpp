// Command-line driver: sampler batteries, artifact emission, verify suites.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lqg/bessel.hpp"
#include "lqg/brownian.hpp"
#include "lqg/field.hpp"
#include "lqg/manifest.hpp"
#include "lqg/parallel.hpp"
#include "lqg/params.hpp"
#include "lqg/quadrant.hpp"
#include "lqg/rng.hpp"
#include "lqg/run_config.hpp"
#include "lqg/spheres.hpp"
#include "lqg/stable.hpp"
#include "lqg/stats.hpp"

namespace fs = std::filesystem;
using namespace lqg;

namespace {

using Clock = std::chrono::steady_clock;

double wall_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path prepare_dir(const RunConfig& cfg, const std::string& sub) {
    fs::path dir = fs::path(cfg.output_dir) / sub;
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + p.string());
    out << text;
}

struct CsvWriter {
    explicit CsvWriter(const fs::path& p) : out(p, std::ios::binary), path(p) {
        if (!out) throw std::runtime_error("cannot open " + p.string());
    }
    void header(const std::string& h) { out << h << "\n"; }
    void row(std::initializer_list<double> vals) {
        char buf[40];
        bool first = true;
        for (double v : vals) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            if (!first) out << ",";
            out << buf;
            first = false;
        }
        out << "\n";
    }
    std::ofstream out;
    fs::path path;
};

int run_loop(const RunConfig& cfg, double alpha) {
    const auto t0 = Clock::now();
    const fs::path dir = prepare_dir(cfg, "loop");
    QuadrantBridgeSpec spec;
    spec.correlation_alpha = alpha;
    spec.relaxation_delta = cfg.loop_relaxation_delta;
    spec.n_steps = cfg.n_steps;

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<SampledPath> loops(n);
    std::vector<long long> attempts(n);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        Rng rng(cfg.seed, RngModule::quadrant, i);
        LoopSample s = sample_quadrant_loop(spec, rng);
        loops[i] = std::move(s.path);
        attempts[i] = s.attempts;
    });

    CsvWriter batch(dir / "loops.csv");
    batch.header("sample,t,x,y");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < loops[i].size(); ++k)
            batch.row({static_cast<double>(i), loops[i].times[k], loops[i].x(k),
                       loops[i].y(k)});
    batch.out.close();

    CsvWriter hist(dir / "z_half.csv");
    hist.header("sample,x_half,y_half");
    const std::size_t mid = loops.empty() ? 0 : loops[0].size() / 2;
    for (std::size_t i = 0; i < n; ++i)
        hist.row({static_cast<double>(i), loops[i].x(mid), loops[i].y(mid)});
    hist.out.close();

    long long total_attempts = 0;
    for (long long a : attempts) total_attempts += a;
    Manifest man(cfg.to_json_text());
    man.add_artifact((dir / "loops.csv").string());
    man.add_artifact((dir / "z_half.csv").string());
    man.add_result("acceptance_rate",
                   static_cast<double>(n) / static_cast<double>(total_attempts));
    man.set_wall_seconds(wall_since(t0));
    man.write((dir / "manifest.json").string());
    return 0;
}

int run_bessel(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path dir = prepare_dir(cfg, "bessel");
    const GammaParams params = make_params(cfg.gamma);
    const double delta = bessel_dimensions(params).sphere_dim;
    const ExcursionTruncation trunc = ExcursionTruncation::by_max(
        cfg.bessel_min_max, cfg.bessel_t_lo, cfg.bessel_t_hi);

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> durations(n);
    std::vector<SampledPath> first(1);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        Rng rng(cfg.seed, RngModule::bessel, i);
        BesselExcursion e =
            sample_bessel_excursion(delta, trunc, cfg.n_steps, rng);
        durations[i] = e.duration;
        if (i == 0) first[0] = std::move(e.path);
    });

    CsvWriter dur(dir / "durations.csv");
    dur.header("sample,duration");
    for (std::size_t i = 0; i < n; ++i)
        dur.row({static_cast<double>(i), durations[i]});
    dur.out.close();
    {
        std::ofstream p0(dir / "excursion0.csv", std::ios::binary);
        first[0].write_csv(p0);
    }

    Manifest man(cfg.to_json_text());
    man.add_artifact((dir / "durations.csv").string());
    man.add_artifact((dir / "excursion0.csv").string());
    man.add_result("delta", delta);
    man.set_wall_seconds(wall_since(t0));
    man.write((dir / "manifest.json").string());
    return 0;
}

int run_stable(const RunConfig& cfg, double horizon) {
    const auto t0 = Clock::now();
    const fs::path dir = prepare_dir(cfg, "stable");
    StableSpec spec;
    StableModel model(spec);

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<StablePathSample> paths(n);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        Rng rng(cfg.seed, RngModule::stable, i);
        paths[i] = sample_stable_path(model, horizon, cfg.n_steps, 0.0, rng,
                                      cfg.stable_threshold_mult);
    });

    CsvWriter jumps(dir / "jumps.csv");
    jumps.header("sample,time,size");
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& j : paths[i].jumps)
            jumps.row({static_cast<double>(i), j.time, j.size});
    jumps.out.close();
    {
        std::ofstream p0(dir / "path0.csv", std::ios::binary);
        paths[0].path.write_csv(p0);
    }

    Manifest man(cfg.to_json_text());
    man.add_artifact((dir / "jumps.csv").string());
    man.add_artifact((dir / "path0.csv").string());
    man.add_result("jump_threshold", paths[0].jump_threshold);
    man.set_wall_seconds(wall_since(t0));
    man.write((dir / "manifest.json").string());
    return 0;
}

int run_sphere_bessel(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path dir = prepare_dir(cfg, "sphere-bessel");
    const GammaParams params = make_params(cfg.gamma);
    SphereBesselConfig scfg;
    scfg.min_max = cfg.bessel_min_max;
    scfg.t_lo = cfg.bessel_t_lo;
    scfg.t_hi = cfg.bessel_t_hi;
    scfg.field.n_x = cfg.n_x;
    scfg.field.n_theta = cfg.n_theta;
    scfg.field.n_modes = cfg.n_modes;
    scfg.area_lo = cfg.sphere_area_lo;
    scfg.area_hi = cfg.sphere_area_hi;

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> areas(n);
    std::vector<long long> attempts(n);
    std::vector<CylinderField> first(1);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        Rng rng(cfg.seed, RngModule::sphere, i);
        SphereSample s = sample_sphere_bessel(params, scfg, rng);
        areas[i] = s.raw_area;
        attempts[i] = s.attempts;
        if (i == 0) first[0] = std::move(s.field);
    });

    CsvWriter out(dir / "areas.csv");
    out.header("sample,raw_area,attempts");
    for (std::size_t i = 0; i < n; ++i)
        out.row({static_cast<double>(i), areas[i],
                 static_cast<double>(attempts[i])});
    out.out.close();
    {
        std::ofstream fb(dir / "field0.bin", std::ios::binary);
        first[0].save_binary(fb);
    }

    Manifest man(cfg.to_json_text());
    man.add_artifact((dir / "areas.csv").string());
    man.add_artifact((dir / "field0.bin").string());
    long long ta = 0;
    for (long long a : attempts) ta += a;
    man.add_result("acceptance_rate",
                   static_cast<double>(n) / static_cast<double>(ta));
    man.set_wall_seconds(wall_since(t0));
    man.write((dir / "manifest.json").string());
    return 0;
}

int run_sphere_bottleneck(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path dir = prepare_dir(cfg, "sphere-bottleneck");
    const GammaParams params = make_params(cfg.gamma);
    SphereBottleneckConfig scfg;
    scfg.r = cfg.bottleneck_r;
    scfg.epsilon = cfg.bottleneck_epsilon;
    scfg.field.n_x = cfg.n_x;
    scfg.field.n_theta = cfg.n_theta;
    scfg.field.n_modes = cfg.n_modes;

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> areas(n);
    std::vector<long long> attempts(n);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        Rng rng(cfg.seed, RngModule::sphere, 0x0B0Eull * (i + 1));
        SphereSample s = sample_sphere_bottleneck(params, scfg, rng);
        areas[i] = s.raw_area;
        attempts[i] = s.attempts;
    });

    CsvWriter out(dir / "areas.csv");
    out.header("sample,raw_area,attempts");
    for (std::size_t i = 0; i < n; ++i)
        out.row({static_cast<double>(i), areas[i],
                 static_cast<double>(attempts[i])});
    out.out.close();

    Manifest man(cfg.to_json_text());
    man.add_artifact((dir / "areas.csv").string());
    long long ta = 0;
    for (long long a : attempts) ta += a;
    man.add_result("acceptance_rate",
                   static_cast<double>(n) / static_cast<double>(ta));
    man.add_result("beta", std::exp(-0.5 * params.gamma * scfg.r));
    man.set_wall_seconds(wall_since(t0));
    man.write((dir / "manifest.json").string());
    return 0;
}

int run_disk(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path dir = prepare_dir(cfg, "disk");
    const GammaParams params = make_params(cfg.gamma);
    DiskConfig dcfg;

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> areas(n), boundaries(n), marks(n);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        Rng rng(cfg.seed, RngModule::sphere, 0xD15Cull * (i + 1));
        DiskSample d = sample_quantum_disk(params, dcfg, rng);
        areas[i] = d.area;
        boundaries[i] = d.boundary_length;
        marks[i] = d.marked_boundary_point;
    });

    CsvWriter out(dir / "disks.csv");
    out.header("sample,boundary_length,area,marked_point");
    for (std::size_t i = 0; i < n; ++i)
        out.row({static_cast<double>(i), boundaries[i], areas[i], marks[i]});
    out.out.close();

    Manifest man(cfg.to_json_text());
    man.add_artifact((dir / "disks.csv").string());
    man.set_wall_seconds(wall_since(t0));
    man.write((dir / "manifest.json").string());
    return 0;
}

int run_levy_sphere(const RunConfig& cfg, int bank_size) {
    const auto t0 = Clock::now();
    const fs::path dir = prepare_dir(cfg, "levy-sphere");
    const GammaParams params = make_params(cfg.gamma);
    StableSpec spec;
    StableModel model(spec);
    DiskConfig dcfg;
    DiskAreaBank bank(params, dcfg, bank_size, cfg.seed ^ 0xBA5Eull,
                      cfg.threads);
    LevySphereConfig lcfg;
    lcfg.excursion_truncation = StableTruncation::by_height(
        cfg.stable_min_height, cfg.stable_t_lo, cfg.stable_t_hi);
    lcfg.jump_threshold_mult = 2.0;

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> areas(n), durations(n), njumps(n);
    std::vector<LevySphereSample> first(1);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        Rng rng(cfg.seed, RngModule::sphere, 0x1EF1ull + i);
        LevySphereSample s = assemble_levy_sphere(params, lcfg, model, bank, rng);
        areas[i] = s.total_area;
        durations[i] = s.excursion.duration;
        njumps[i] = static_cast<double>(s.decorations.size());
        if (i == 0) first[0] = std::move(s);
    });

    CsvWriter out(dir / "areas.csv");
    out.header("sample,total_area,duration,n_jumps");
    for (std::size_t i = 0; i < n; ++i)
        out.row({static_cast<double>(i), areas[i], durations[i], njumps[i]});
    out.out.close();

    CsvWriter dec(dir / "decorations0.csv");
    dec.header("time,boundary_length,clockwise,marked_point,area,materialized");
    for (const auto& d : first[0].decorations)
        dec.row({d.time, d.boundary_length, d.clockwise ? 1.0 : 0.0,
                 d.marked_point, d.area, d.materialized ? 1.0 : 0.0});
    dec.out.close();

    Manifest man(cfg.to_json_text());
    man.add_artifact((dir / "areas.csv").string());
    man.add_artifact((dir / "decorations0.csv").string());
    man.add_result("bank_mean_area", bank.mean());
    man.set_wall_seconds(wall_since(t0));
    man.write((dir / "manifest.json").string());
    return 0;
}

// The e^{gamma C} / e^{gamma C/2} / e^{3 gamma C/4} algebra, as a
// deterministic check battery.
int verify_scaling(const RunConfig& cfg) {
    const fs::path dir = prepare_dir(cfg, "verify-scaling");
    nlohmann::json rep;
    bool ok = true;
    auto record = [&](const std::string& name, bool pass, double value) {
        rep[name] = {{"pass", pass}, {"value", value}};
        ok = ok && pass;
        std::printf("  [%s] %s (%.3e)\n", pass ? "ok" : "FAIL", name.c_str(),
                    value);
    };

    for (double g : {0.7, 1.0, std::sqrt(2.0), gamma_sqrt83(), 1.9}) {
        const GammaParams p = make_params(g);
        // Group law.
        double worst = 0.0;
        for (double c1 : {-1.3, 0.4, 2.0})
            for (double c2 : {-0.7, 1.1}) {
                const double lhs = area_factor(p, c1) * area_factor(p, c2);
                const double rhs = area_factor(p, c1 + c2);
                worst = std::max(worst, std::abs(lhs / rhs - 1.0));
            }
        record("area_group_law_gamma_" + std::to_string(g), worst < 1e-12,
               worst);
        // boundary^2 = area.
        double worst2 = 0.0;
        for (double c : {-2.0, 0.3, 1.7}) {
            const double b = boundary_factor(p, c);
            worst2 = std::max(worst2,
                              std::abs(b * b / area_factor(p, c) - 1.0));
        }
        record("boundary_squared_gamma_" + std::to_string(g), worst2 < 1e-12,
               worst2);
    }
    // natural-time^4 = boundary^6 at sqrt(8/3).
    {
        const GammaParams p = make_params(gamma_sqrt83());
        double worst = 0.0;
        for (double c : {-1.0, 0.5, 2.5}) {
            const double nt = natural_time_factor(p, c);
            const double bd = boundary_factor(p, c);
            worst = std::max(worst,
                             std::abs(std::pow(nt, 4) / std::pow(bd, 6) - 1.0));
        }
        record("natural_time_consistency", worst < 1e-12, worst);
        // Example values: C = (2/gamma) ln 2.
        const double c = 2.0 / p.gamma * std::log(2.0);
        record("area_doubling",
               std::abs(apply_scaling({c}, ScaledQuantity::area, 1.0, p) - 4.0) <
                   1e-12,
               apply_scaling({c}, ScaledQuantity::area, 1.0, p));
        record("natural_time_doubling",
               std::abs(apply_scaling({c}, ScaledQuantity::natural_time, 1.0, p) -
                        std::pow(2.0, 1.5)) < 1e-12,
               apply_scaling({c}, ScaledQuantity::natural_time, 1.0, p));
    }
    // The gate: natural time demands gamma = sqrt(8/3).
    {
        bool threw = false;
        try {
            const GammaParams p = make_params(1.5);
            apply_scaling({1.0}, ScaledQuantity::natural_time, 1.0, p);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        record("natural_time_gate", threw, threw ? 1.0 : 0.0);
    }
    write_text(dir / "report.json", rep.dump(2) + "\n");
    std::printf("verify scaling: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

// Identical (config, seed) must give byte-identical artifacts at 1, 4 and
// 8 threads.
int verify_determinism(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    cfg.n_samples = std::min<long long>(cfg.n_samples, 64);
    cfg.n_steps = std::min(cfg.n_steps, 1 << 10);
    nlohmann::json rep;
    bool ok = true;
    const fs::path base = fs::path(cfg.output_dir);
    std::vector<std::string> hashes;
    for (int threads : {1, 4, 8}) {
        RunConfig c = cfg;
        c.threads = threads;
        c.output_dir = (base / ("det-threads-" + std::to_string(threads))).string();
        run_loop(c, 0.5);
        run_stable(c, 1.0);
        run_disk(c);
        std::string combined;
        for (const char* f : {"loop/loops.csv", "loop/z_half.csv",
                              "stable/jumps.csv", "stable/path0.csv",
                              "disk/disks.csv"}) {
            combined += hash_hex(hash_file((fs::path(c.output_dir) / f).string()));
        }
        hashes.push_back(combined);
        rep["threads_" + std::to_string(threads)] = combined;
    }
    ok = hashes[0] == hashes[1] && hashes[1] == hashes[2];
    rep["byte_identical"] = ok;
    const fs::path dir = prepare_dir(cfg_in, "verify-determinism");
    write_text(dir / "report.json", rep.dump(2) + "\n");
    std::printf("verify determinism: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

int verify_params(const RunConfig&) {
    bool ok = true;
    for (double g = 0.05; g < 2.0; g += 0.05) {
        const GammaParams p = make_params(g);
        ok = ok && std::abs(p.kappa * p.kappa_prime - 16.0) < 1e-12;
        ok = ok && p.q_charge > 2.0;
        ok = ok && p.bm_correlation > -1.0 && p.bm_correlation < 1.0;
        ok = ok && ((p.bm_correlation >= 0.0) == (g >= std::sqrt(2.0) - 1e-15));
        const BesselDimensions d = bessel_dimensions(p);
        ok = ok && d.cone_dim(p.q_charge - 0.1) > 2.0;
    }
    std::printf("verify params: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    // --config loads first; explicit flags then override its values.
    RunConfig cfg;
    cfg.apply_env_defaults();
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = RunConfig::from_json_file(argv[i + 1]);
                cfg.apply_env_defaults();
            } catch (const std::exception& e) {
                std::cerr << "lqg: bad config: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"Monte Carlo library for quantum-sphere constructions"};
    app.require_subcommand(1);
    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON config file");

    double alpha = 0.5;
    double horizon = 1.0;
    int bank_size = 2000;
    std::string verify_suite;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_dummy, "JSON config file");
        sub->add_option("--gamma", cfg.gamma, "coupling in (0,2)");
        sub->add_option("--seed", cfg.seed, "master seed");
        sub->add_option("--n-samples", cfg.n_samples, "samples to draw");
        sub->add_option("--n-steps", cfg.n_steps, "grid steps");
        sub->add_option("--threads", cfg.threads, "worker threads");
        sub->add_option("--output-dir", cfg.output_dir, "artifact directory");
    };

    CLI::App* loop = app.add_subcommand("loop", "quadrant Brownian loops");
    add_common(loop);
    loop->add_option("--alpha", alpha, "increment correlation");
    loop->add_option("--delta", cfg.loop_relaxation_delta, "barrier relaxation");

    CLI::App* bessel = app.add_subcommand("bessel", "Bessel excursions");
    add_common(bessel);

    CLI::App* stable = app.add_subcommand("stable", "stable paths with jumps");
    add_common(stable);
    stable->add_option("--horizon", horizon, "path horizon");

    CLI::App* sb = app.add_subcommand("sphere-bessel", "Bessel-route spheres");
    add_common(sb);

    CLI::App* sbot =
        app.add_subcommand("sphere-bottleneck", "cone-route spheres");
    add_common(sbot);

    CLI::App* disk = app.add_subcommand("disk", "quantum disks");
    add_common(disk);

    CLI::App* levy = app.add_subcommand("levy-sphere", "jump-decorated spheres");
    add_common(levy);
    levy->add_option("--bank-size", bank_size, "disk area bank size");

    CLI::App* verify = app.add_subcommand("verify", "verification suites");
    add_common(verify);
    verify->add_option("suite", verify_suite, "scaling | determinism | params")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (loop->parsed()) return run_loop(cfg, alpha);
        if (bessel->parsed()) return run_bessel(cfg);
        if (stable->parsed()) return run_stable(cfg, horizon);
        if (sb->parsed()) return run_sphere_bessel(cfg);
        if (sbot->parsed()) return run_sphere_bottleneck(cfg);
        if (disk->parsed()) return run_disk(cfg);
        if (levy->parsed()) return run_levy_sphere(cfg, bank_size);
        if (verify->parsed()) {
            if (verify_suite == "scaling") return verify_scaling(cfg);
            if (verify_suite == "determinism") return verify_determinism(cfg);
            if (verify_suite == "params") return verify_params(cfg);
            std::cerr << "lqg: unknown verify suite '" << verify_suite << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "lqg: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
