#include "lqg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/rng.hpp"

namespace lqg {

namespace {

// Least squares of log-density vs log-midpoint for one set of bin counts.
// Returns false if fewer than 3 bins are occupied.
bool slope_of_counts(const std::vector<double>& log_mid,
                     const std::vector<long long>& counts, double total_n,
                     const std::vector<double>& widths, double* slope,
                     double* r2) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] < 1) continue;
        xs.push_back(log_mid[i]);
        ys.push_back(std::log(static_cast<double>(counts[i]) /
                              (total_n * widths[i])));
    }
    if (xs.size() < 3) return false;
    const std::size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double den = m * sxx - sx * sx;
    if (den <= 0) return false;
    *slope = (m * sxy - sx * sy) / den;
    const double sst = syy - sy * sy / m;
    const double ssr = *slope * (sxy - sx * sy / m);
    *r2 = sst > 0 ? ssr / sst : 1.0;
    return true;
}

}  // namespace

SlopeFit fit_tail_exponent(const std::vector<double>& samples, double window_lo,
                           double window_hi, int n_bins, int bootstrap_rounds,
                           std::uint64_t bootstrap_seed) {
    if (!(window_lo > 0.0 && window_hi > window_lo))
        throw std::invalid_argument("fit_tail_exponent: bad window");
    if (n_bins < 4) throw std::invalid_argument("fit_tail_exponent: n_bins >= 4");

    std::vector<double> in_window;
    for (double s : samples)
        if (s >= window_lo && s < window_hi) in_window.push_back(s);
    if (in_window.size() < 1000)
        throw std::runtime_error(
            "fit_tail_exponent: fewer than 1e3 samples in window");

    const double llo = std::log(window_lo);
    const double lhi = std::log(window_hi);
    const double lw = (lhi - llo) / n_bins;
    std::vector<double> log_mid(n_bins), widths(n_bins);
    for (int i = 0; i < n_bins; ++i) {
        log_mid[i] = llo + (i + 0.5) * lw;
        widths[i] = std::exp(llo + (i + 1) * lw) - std::exp(llo + i * lw);
    }
    auto bin_of = [&](double v) {
        int b = static_cast<int>((std::log(v) - llo) / lw);
        return std::min(std::max(b, 0), n_bins - 1);
    };

    std::vector<long long> counts(n_bins, 0);
    for (double s : in_window) ++counts[bin_of(s)];

    SlopeFit fit;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.n_points = n_bins;
    fit.n_in_window = static_cast<long long>(in_window.size());
    const double total = static_cast<double>(samples.size());
    if (!slope_of_counts(log_mid, counts, total, widths, &fit.slope,
                         &fit.r_squared))
        throw std::runtime_error("fit_tail_exponent: degenerate binning");

    // Bootstrap over the in-window samples.
    Rng rng(bootstrap_seed, RngModule::stats, 0);
    std::vector<double> slopes;
    slopes.reserve(bootstrap_rounds);
    const std::size_t n = in_window.size();
    std::vector<long long> bcounts(n_bins);
    for (int r = 0; r < bootstrap_rounds; ++r) {
        std::fill(bcounts.begin(), bcounts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(rng.uniform() * n) % n;
            ++bcounts[bin_of(in_window[j])];
        }
        double s, r2;
        if (slope_of_counts(log_mid, bcounts, total, widths, &s, &r2))
            slopes.push_back(s);
    }
    if (slopes.size() > 8) {
        double m = 0;
        for (double s : slopes) m += s;
        m /= slopes.size();
        double v = 0;
        for (double s : slopes) v += (s - m) * (s - m);
        fit.stderr_ = std::sqrt(v / (slopes.size() - 1));
    } else {
        fit.stderr_ = std::abs(fit.slope) * 0.5 + 1e-6;
    }
    return fit;
}

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_distance: empty sample");
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const std::size_t n1 = sa.size(), n2 = sb.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < n1 && j < n2) {
        const double x = std::min(sa[i], sb[j]);
        while (i < n1 && sa[i] <= x) ++i;
        while (j < n2 && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n1 -
                                 static_cast<double>(j) / n2));
    }
    return d;
}

KsReport two_sample_ks(const std::vector<double>& a,
                       const std::vector<double>& b) {
    if (a.size() < 50 || b.size() < 50)
        throw std::invalid_argument("two_sample_ks: need n1, n2 >= 50");
    for (double v : a)
        if (std::isnan(v)) throw std::invalid_argument("two_sample_ks: NaN in a");
    for (double v : b)
        if (std::isnan(v)) throw std::invalid_argument("two_sample_ks: NaN in b");
    KsReport rep;
    rep.n1 = static_cast<long long>(a.size());
    rep.n2 = static_cast<long long>(b.size());
    rep.statistic = ks_distance(a, b);
    const double ne = static_cast<double>(rep.n1) * rep.n2 / (rep.n1 + rep.n2);
    const double lam =
        (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * rep.statistic;
    // Kolmogorov tail sum; converges fast for lam > 0.3.
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 101; ++k) {
        const double term = std::exp(-2.0 * k * k * lam * lam);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    rep.p_value = std::min(std::max(2.0 * p, 0.0), 1.0);
    return rep;
}

std::vector<LadderRow> dyadic_convergence_study(
    const std::vector<double>& ladder,
    const std::function<std::vector<double>(std::size_t)>& sampler) {
    if (ladder.size() < 3)
        throw std::invalid_argument("dyadic_convergence_study: ladder >= 3");
    std::vector<std::vector<double>> obs(ladder.size());
    for (std::size_t i = 0; i < ladder.size(); ++i) obs[i] = sampler(i);
    std::vector<LadderRow> rows(ladder.size());
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        rows[i].parameter = ladder[i];
        rows[i].n = static_cast<long long>(obs[i].size());
        rows[i].ks_to_next = i + 1 < ladder.size()
                                 ? ks_distance(obs[i], obs[i + 1])
                                 : 0.0;
        rows[i].ks_to_finest = i + 1 < ladder.size()
                                   ? ks_distance(obs[i], obs.back())
                                   : 0.0;
    }
    return rows;
}

bool isotonic_decreasing(const std::vector<double>& values,
                         const std::vector<double>& stderrs, double z_tol) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double allowed =
            z_tol * std::hypot(stderrs[i], stderrs[i - 1]);
        if (values[i] > values[i - 1] + allowed) return false;
    }
    return true;
}

double mean_of(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    return v.empty() ? 0.0 : m / v.size();
}

double stderr_of_mean(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1) / v.size());
}

double correlation_of(const std::vector<double>& x,
                      const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("correlation_of: bad inputs");
    const double mx = mean_of(x), my = mean_of(y);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace lqg
