#include "lqg/stable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/bessel.hpp"
#include "lqg/parallel.hpp"
#include "lqg/stats.hpp"

namespace lqg {

void StableSpec::validate() const {
    if (!(stable_index > 1.0 && stable_index < 2.0))
        throw std::domain_error("StableSpec: stable_index must lie in (1,2)");
}

double levy_jump_constant(double alpha) {
    return alpha * (1.0 - alpha) /
           (std::tgamma(2.0 - alpha) * std::cos(M_PI * alpha / 2.0));
}

namespace {

constexpr double kTableLo = -8.0;
constexpr double kTableHi = 60.0;
constexpr int kTableN = 4096;
constexpr int kQuadN = 32768;  // Simpson panels for the inversion integral

}  // namespace

StableModel::StableModel(const StableSpec& spec) : spec_(spec) {
    spec_.validate();
    const double alpha = spec_.stable_index;
    const double b = std::tan(M_PI * alpha / 2.0);  // beta = +1

    // CMS constants for the S1 parameterization.
    cms_b_ = std::atan(b) / alpha;
    cms_s_ = std::pow(1.0 + b * b, 0.5 / alpha);

    x_lo_ = kTableLo;
    x_hi_ = kTableHi;
    dx_ = (x_hi_ - x_lo_) / (kTableN - 1);

    // Fourier inversion f(x) = (1/pi) Int_0^T exp(-t^alpha)
    // cos(b t^alpha - t x) dt; the t-grid and amplitude/phase arrays are
    // shared across all x.
    const double t_max = std::pow(39.1, 1.0 / alpha);
    const double ht = t_max / kQuadN;
    std::vector<double> amp(kQuadN + 1), phase(kQuadN + 1), tg(kQuadN + 1);
    for (int i = 0; i <= kQuadN; ++i) {
        const double t = i * ht;
        const double ta = std::pow(t, alpha);
        tg[i] = t;
        amp[i] = std::exp(-ta);
        phase[i] = b * ta;
    }
    pdf_.assign(kTableN, 0.0);
    for (int k = 0; k < kTableN; ++k) {
        const double x = x_lo_ + k * dx_;
        double acc = 0.0;
        // Simpson weights 1,4,2,...,4,1.
        for (int i = 0; i <= kQuadN; ++i) {
            const double v = amp[i] * std::cos(phase[i] - tg[i] * x);
            const double w = (i == 0 || i == kQuadN) ? 1.0 : (i & 1 ? 4.0 : 2.0);
            acc += w * v;
        }
        pdf_[k] = std::max(acc * ht / (3.0 * M_PI), 0.0);
    }
    pdf_max_ = *std::max_element(pdf_.begin(), pdf_.end());
    tail_c_ = levy_jump_constant(alpha);

    // CDF by trapezoid, completed with the power tail mass beyond x_hi.
    cdf_.assign(kTableN, 0.0);
    cum_xf_.assign(kTableN, 0.0);
    for (int k = 1; k < kTableN; ++k) {
        const double xm = x_lo_ + (k - 0.5) * dx_;
        cdf_[k] = cdf_[k - 1] + 0.5 * (pdf_[k - 1] + pdf_[k]) * dx_;
        cum_xf_[k] =
            cum_xf_[k - 1] + 0.5 * (pdf_[k - 1] + pdf_[k]) * dx_ * xm;
    }
    const double tail_mass = tail_c_ / alpha * std::pow(x_hi_, -alpha);
    total_ = cdf_.back() + tail_mass;
}

double StableModel::pdf(double x) const {
    if (x <= x_lo_) return 0.0;
    if (x >= x_hi_) return tail_c_ * std::pow(x, -alpha() - 1.0);
    const double u = (x - x_lo_) / dx_;
    const int k = static_cast<int>(u);
    const double w = u - k;
    return pdf_[k] * (1.0 - w) + pdf_[k + 1] * w;
}

double StableModel::cdf(double x) const {
    if (x <= x_lo_) return 0.0;
    if (x >= x_hi_)
        return 1.0 - tail_c_ / alpha() * std::pow(x, -alpha()) / total_;
    const double u = (x - x_lo_) / dx_;
    const int k = static_cast<int>(u);
    const double w = u - k;
    return (cdf_[k] * (1.0 - w) + cdf_[k + 1] * w) / total_;
}

double StableModel::mean_below(double c) const {
    if (c <= x_lo_) return x_lo_;
    if (c > x_hi_) c = x_hi_;
    const double u = (c - x_lo_) / dx_;
    const int k = static_cast<int>(u);
    const double w = u - k;
    const double num = cum_xf_[k] * (1.0 - w) + cum_xf_[std::min(k + 1, kTableN - 1)] * w;
    const double den = cdf_[k] * (1.0 - w) + cdf_[std::min(k + 1, kTableN - 1)] * w;
    return den > 0.0 ? num / den : x_lo_;
}

double StableModel::sample_standard(Rng& rng) const {
    // Chambers-Mallows-Stuck, beta = +1.
    const double alpha = spec_.stable_index;
    const double u = M_PI * (rng.uniform() - 0.5);
    double w;
    do {
        w = rng.exponential();
    } while (w == 0.0);
    const double t = alpha * (u + cms_b_);
    return cms_s_ * std::sin(t) / std::pow(std::cos(u), 1.0 / alpha) *
           std::pow(std::cos(u - t) / w, (1.0 - alpha) / alpha);
}

double StableModel::sample_increment(double dt, Rng& rng) const {
    if (!(dt > 0.0)) throw std::domain_error("sample_increment: dt must be > 0");
    const double v = std::pow(dt, 1.0 / alpha()) * sample_standard(rng);
    return spec_.jump_sign == JumpSign::positive ? v : -v;
}

StablePathSample sample_stable_path(const StableModel& model, double horizon,
                                    int n_steps, double x0, Rng& rng,
                                    double threshold_mult) {
    if (!(horizon > 0.0) || n_steps < 1)
        throw std::invalid_argument("sample_stable_path: bad horizon/n_steps");
    const double alpha = model.alpha();
    const double dt = horizon / n_steps;
    const double unit = std::pow(dt, 1.0 / alpha);
    const double b = threshold_mult * unit;  // jump recording threshold
    const double c_levy = levy_jump_constant(alpha);
    const double lam = dt * c_levy * std::pow(b, -alpha) / alpha;
    const double comp_mean = dt * c_levy * std::pow(b, 1.0 - alpha) / (alpha - 1.0);
    const double trunc_mean = unit * model.mean_below(threshold_mult);
    const double sgn =
        model.spec().jump_sign == JumpSign::positive ? 1.0 : -1.0;

    StablePathSample out;
    out.jump_threshold = b;
    out.path = SampledPath::make_scalar(n_steps + 1);
    out.path.times[0] = 0.0;
    out.path.values[0] = x0;
    double x = x0;
    for (int i = 1; i <= n_steps; ++i) {
        const double t0 = (i - 1) * dt;
        // Explicit super-threshold jumps: Poisson count, Pareto sizes.
        double jump_sum = 0.0;
        const long long k = rng.poisson(lam);
        for (long long j = 0; j < k; ++j) {
            const double size = b * std::pow(rng.uniform(), -1.0 / alpha);
            jump_sum += size;
            out.jumps.push_back({t0 + rng.uniform() * dt, size});
        }
        // Sub-threshold part: exact increment conditioned below b, then
        // centered so the whole step has mean zero.
        double v;
        do {
            v = model.sample_standard(rng);
        } while (v > threshold_mult);
        x += sgn * (jump_sum - comp_mean + unit * v - trunc_mean);
        out.path.times[i] = i * dt;
        out.path.values[i] = x;
    }
    std::sort(out.jumps.begin(), out.jumps.end(),
              [](const JumpRecord& a, const JumpRecord& bb) {
                  return a.time < bb.time;
              });
    return out;
}

std::vector<double> running_infimum(const SampledPath& path) {
    std::vector<double> inf(path.size());
    double m = path.values[0];
    for (std::size_t i = 0; i < path.size(); ++i) {
        m = std::min(m, path.values[i]);
        inf[i] = m;
    }
    return inf;
}

SampledPath stable_bridge(const StableModel& model, double a, double b,
                          double duration, int n_steps, Rng& rng) {
    if (!(duration > 0.0) || n_steps < 2)
        throw std::invalid_argument("stable_bridge: bad duration/n_steps");
    const double alpha = model.alpha();
    const double h = duration / n_steps;
    const double unit = std::pow(h, 1.0 / alpha);
    SampledPath p = SampledPath::make_scalar(n_steps + 1);
    p.times[0] = 0.0;
    p.values[0] = a;
    double x = a;
    const long long cap = 4'000'000;
    for (int i = 1; i < n_steps; ++i) {
        const double s_after = duration - i * h;  // time left after this step
        const double su = std::pow(s_after, 1.0 / alpha);
        long long tries = 0;
        for (;;) {
            if (++tries > cap)
                throw std::runtime_error("stable_bridge: step rejection stuck");
            const double dx = unit * model.sample_standard(rng);
            // Weight by the density of still reaching b in s_after.
            const double z = (b - x - dx) / su;
            if (rng.uniform() * model.pdf_max() <= model.pdf(z)) {
                x += dx;
                break;
            }
        }
        p.times[i] = i * h;
        p.values[i] = x;
    }
    p.times[n_steps] = duration;
    p.values[n_steps] = b;
    return p;
}

StableTruncation StableTruncation::fixed(double t) {
    StableTruncation tr;
    tr.kind = Kind::fixed_duration;
    tr.fixed_duration = t;
    return tr;
}
StableTruncation StableTruncation::by_height(double m, double lo, double hi) {
    StableTruncation tr;
    tr.kind = Kind::min_height;
    tr.min_height = m;
    tr.t_lo = lo;
    tr.t_hi = hi;
    return tr;
}
StableTruncation StableTruncation::by_jump(double j, double lo, double hi) {
    StableTruncation tr;
    tr.kind = Kind::min_max_jump;
    tr.min_max_jump = j;
    tr.t_lo = lo;
    tr.t_hi = hi;
    return tr;
}

namespace {

// Normalized excursion of the spectrally positive process: Vervaat
// transform (cyclic shift at the unique minimum) of the grid bridge
// 0 -> 0 over [0,1].
SampledPath normalized_excursion(const StableModel& model, int n_steps,
                                 Rng& rng) {
    SampledPath bridge = stable_bridge(model, 0.0, 0.0, 1.0, n_steps, rng);
    const std::size_t n = n_steps;
    std::size_t imin = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (bridge.values[i] < bridge.values[imin]) imin = i;
    SampledPath exc = SampledPath::make_scalar(n + 1);
    const double vmin = bridge.values[imin];
    const double h = 1.0 / n;
    for (std::size_t j = 0; j <= n; ++j) {
        exc.times[j] = j * h;
        const std::size_t src = imin + j <= n ? imin + j : imin + j - n;
        exc.values[j] = bridge.values[src] - vmin;
    }
    exc.values[0] = 0.0;
    exc.values[n] = 0.0;
    return exc;
}

void collect_excursion_jumps(StableExcursion* e, double threshold) {
    e->jumps.clear();
    const auto& p = e->path;
    for (std::size_t i = 1; i < p.size(); ++i) {
        const double d = p.values[i] - p.values[i - 1];
        if (d >= threshold) e->jumps.push_back({p.times[i], d});
    }
}

}  // namespace

StableExcursion sample_stable_excursion(const StableModel& model,
                                        const StableTruncation& trunc,
                                        int n_steps, Rng& rng,
                                        double jump_threshold_mult) {
    const double alpha = model.alpha();
    const double rho = model.spec().rho();
    const double h_unit = std::pow(1.0 / n_steps, 1.0 / alpha);
    StableExcursion e;

    auto rescale = [&](SampledPath& p, double t) {
        const double sp = std::pow(t, 1.0 / alpha);
        for (std::size_t i = 0; i < p.size(); ++i) {
            p.times[i] *= t;
            p.values[i] *= sp;
        }
    };

    if (trunc.kind == StableTruncation::Kind::fixed_duration) {
        const double t = trunc.fixed_duration;
        e.duration = t;
        e.path = normalized_excursion(model, n_steps, rng);
        rescale(e.path, t);
        collect_excursion_jumps(
            &e, jump_threshold_mult * h_unit * std::pow(t, 1.0 / alpha));
        return e;
    }

    const double p_exp = rho - 2.0;
    for (long long attempt = 0; attempt < trunc.max_attempts; ++attempt) {
        const double t = sample_power_law(p_exp, trunc.t_lo, trunc.t_hi, rng);
        SampledPath exc = normalized_excursion(model, n_steps, rng);
        const double scale = std::pow(t, 1.0 / alpha);
        bool ok = false;
        if (trunc.kind == StableTruncation::Kind::min_height) {
            const double mx =
                *std::max_element(exc.values.begin(), exc.values.end());
            ok = mx * scale >= trunc.min_height;
        } else {
            double mj = 0.0;
            for (std::size_t i = 1; i < exc.size(); ++i)
                mj = std::max(mj, exc.values[i] - exc.values[i - 1]);
            ok = mj * scale >= trunc.min_max_jump;
        }
        if (!ok) continue;
        e.duration = t;
        e.path = std::move(exc);
        rescale(e.path, t);
        collect_excursion_jumps(&e,
                                jump_threshold_mult * h_unit * scale);
        return e;
    }
    throw std::runtime_error(
        "sample_stable_excursion: truncation retry budget exhausted");
}

namespace {

struct DualityFunctionals {
    bool kept = false;
    double lifetime = 0.0;
    double midpoint = 0.0;
    double maximum = 0.0;
    double one_jump = -1.0;  // -1 when the trial recorded no jump
};

double interp_at(const std::vector<double>& vals, double dt, double t) {
    const double u = t / dt;
    const std::size_t k = std::min(static_cast<std::size_t>(u), vals.size() - 2);
    const double w = u - static_cast<double>(k);
    return vals[k] * (1.0 - w) + vals[k + 1] * w;
}

// Forward side: positive jumps, from x0 down to the first zero. The
// time-reversed functionals coincide with the forward ones (lifetime, max,
// jump set, value at half-life), so they are measured on the forward path.
DualityFunctionals duality_forward(const StableModel& model, double x0,
                                   const DualityConfig& cfg, Rng& rng) {
    const double dt = cfg.dt;
    const double unit = std::pow(dt, 1.0 / model.alpha());
    const double b = cfg.jump_threshold_mult * unit;
    DualityFunctionals out;
    std::vector<double> vals{x0};
    std::vector<double> jumps;
    double x = x0;
    double t = 0.0;
    while (t < cfg.t_max) {
        const double d = unit * model.sample_standard(rng);
        const double xn = x + d;
        t += dt;
        vals.push_back(xn);
        if (xn <= 0.0) {
            const double frac = x / (x - xn);
            const double tau = t - dt + frac * dt;
            out.kept = true;
            out.lifetime = tau;
            out.midpoint = interp_at(vals, dt, 0.5 * tau);
            double mx = 0.0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i)
                mx = std::max(mx, vals[i]);
            out.maximum = mx;
            if (!jumps.empty()) {
                const std::size_t j = static_cast<std::size_t>(
                                          rng.uniform() * jumps.size()) %
                                      jumps.size();
                out.one_jump = jumps[j];
            }
            return out;
        }
        if (d >= b) jumps.push_back(d);
        x = xn;
    }
    return out;  // not absorbed within t_max: discarded
}

// Reversed side: conditioned-to-stay-positive h-transform of the
// negative-jump process from 0, stopped at its last passage of x0 (watched
// until t_ext so late returns are caught). The harmonic function is the
// scale function of the spectrally negative stable, h(x) = x^{alpha-1}.
DualityFunctionals duality_reversed(const StableModel& model, double x0,
                                    const DualityConfig& cfg, Rng& rng) {
    const double dt = cfg.dt;
    const double alpha = model.alpha();
    const double unit = std::pow(dt, 1.0 / alpha);
    const double b = cfg.jump_threshold_mult * unit;
    const double cap = 12.0 * unit;
    const double hpow = alpha - 1.0;
    const std::size_t n_ext = static_cast<std::size_t>(cfg.t_ext / dt);
    DualityFunctionals out;
    std::vector<double> vals;
    vals.reserve(n_ext + 1);
    vals.push_back(0.0);
    std::vector<std::pair<double, double>> jumps;  // (time, magnitude)
    double x = 0.0;
    double last_cross = -1.0;
    for (std::size_t i = 1; i <= n_ext; ++i) {
        double y;
        for (;;) {
            const double d = -unit * model.sample_standard(rng);
            y = x + d;
            if (y <= 0.0) continue;
            double acc =
                y >= x + cap ? 1.0 : std::pow(y / (x + cap), hpow);
            if (rng.uniform() <= acc) {
                if (-d >= b) jumps.push_back({i * dt, -d});
                break;
            }
        }
        if ((x - x0) * (y - x0) <= 0.0 && y != x) {
            const double frac = (x0 - x) / (y - x);
            last_cross = (i - 1 + frac) * dt;
        }
        vals.push_back(y);
        x = y;
    }
    if (last_cross < 0.0 || last_cross > cfg.t_max) return out;
    out.kept = true;
    out.lifetime = last_cross;
    out.midpoint = interp_at(vals, dt, 0.5 * last_cross);
    double mx = x0;
    const std::size_t stop = static_cast<std::size_t>(last_cross / dt);
    for (std::size_t i = 0; i <= stop && i < vals.size(); ++i)
        mx = std::max(mx, vals[i]);
    out.maximum = mx;
    std::vector<double> kept_jumps;
    for (const auto& jr : jumps)
        if (jr.first <= last_cross) kept_jumps.push_back(jr.second);
    if (!kept_jumps.empty()) {
        const std::size_t j =
            static_cast<std::size_t>(rng.uniform() * kept_jumps.size()) %
            kept_jumps.size();
        out.one_jump = kept_jumps[j];
    }
    return out;
}

KsSummary ks_summary(const std::vector<double>& a, const std::vector<double>& b) {
    const KsReport rep = two_sample_ks(a, b);
    KsSummary s;
    s.statistic = rep.statistic;
    s.p_value = rep.p_value;
    s.n1 = rep.n1;
    s.n2 = rep.n2;
    return s;
}

}  // namespace

DualityReport check_time_reversal_duality(const StableModel& model, double x0,
                                          long long n_trials, std::uint64_t seed,
                                          const DualityConfig& cfg) {
    if (model.spec().jump_sign != JumpSign::positive)
        throw std::domain_error(
            "check_time_reversal_duality: forward side must have positive jumps");
    if (!(x0 > 0.0))
        throw std::domain_error("check_time_reversal_duality: x0 must be > 0");

    std::vector<DualityFunctionals> fwd(static_cast<std::size_t>(n_trials));
    std::vector<DualityFunctionals> rev(static_cast<std::size_t>(n_trials));
    parallel_for(static_cast<std::size_t>(n_trials), cfg.threads,
                 [&](std::size_t i) {
                     Rng rng_f(seed, RngModule::stable, 2 * i);
                     fwd[i] = duality_forward(model, x0, cfg, rng_f);
                     Rng rng_r(seed, RngModule::stable, 2 * i + 1);
                     rev[i] = duality_reversed(model, x0, cfg, rng_r);
                 });

    DualityReport rep;
    std::vector<double> lf, lr, jf, jr, mf, mr, xf, xr;
    for (const auto& f : fwd) {
        if (!f.kept) continue;
        ++rep.kept_forward;
        lf.push_back(f.lifetime);
        mf.push_back(f.midpoint);
        xf.push_back(f.maximum);
        if (f.one_jump >= 0.0) jf.push_back(f.one_jump);
    }
    for (const auto& r : rev) {
        if (!r.kept) continue;
        ++rep.kept_reversed;
        lr.push_back(r.lifetime);
        mr.push_back(r.midpoint);
        xr.push_back(r.maximum);
        if (r.one_jump >= 0.0) jr.push_back(r.one_jump);
    }
    rep.lifetime = ks_summary(lf, lr);
    rep.jump_size = ks_summary(jf, jr);
    rep.midpoint = ks_summary(mf, mr);
    rep.maximum = ks_summary(xf, xr);
    return rep;
}

TimeEstimate recover_elapsed_time_binned(long long count_at_j_max, int j_max,
                                         double c0) {
    TimeEstimate est;
    if (count_at_j_max <= 0) {
        est.value = 0.0;
        est.infinite_variance_flag = true;
        return est;
    }
    const double denom = (2.0 / 3.0) * c0 * std::exp(1.5 * j_max) *
                         (std::exp(1.5) - 1.0);
    est.value = static_cast<double>(count_at_j_max) / denom;
    return est;
}

TimeEstimate recover_elapsed_time(const std::vector<JumpRecord>& jumps,
                                  int j_max, double c0) {
    const double lo = std::exp(-(j_max + 1.0));
    const double hi = std::exp(-static_cast<double>(j_max));
    long long count = 0;
    for (const auto& j : jumps)
        if (j.size >= lo && j.size < hi) ++count;
    if (jumps.empty()) {
        TimeEstimate est;
        est.value = 0.0;
        est.infinite_variance_flag = true;
        return est;
    }
    return recover_elapsed_time_binned(count, j_max, c0);
}

}  // namespace lqg
