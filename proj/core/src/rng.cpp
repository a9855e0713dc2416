#include "lqg/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace lqg {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::uint32_t mulhi(std::uint32_t a, std::uint32_t b, std::uint32_t* lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    *lo = static_cast<std::uint32_t>(p);
    return static_cast<std::uint32_t>(p >> 32);
}

// splitmix64: used only to whiten the (seed, module, task) triple into the
// Philox key/counter, so nearby task indices give unrelated streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, RngModule module, std::uint64_t task_index)
    : block_pos_(4), cached_normal_(0.0), has_cached_normal_(false) {
    const std::uint64_t k =
        splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(module) << 32));
    key_[0] = static_cast<std::uint32_t>(k);
    key_[1] = static_cast<std::uint32_t>(k >> 32);
    ctr_hi_ = splitmix64(task_index ^ 0xA02BDBF7BB3C0A7Eull);
    ctr_lo_ = 0;
}

Rng Rng::fork(std::uint64_t subtask) const {
    Rng child = *this;
    child.ctr_hi_ = splitmix64(ctr_hi_ ^ splitmix64(subtask + 0x1ull));
    child.ctr_lo_ = 0;
    child.block_pos_ = 4;
    child.has_cached_normal_ = false;
    return child;
}

void Rng::refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo_);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi_);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi_ >> 32);
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, lo1;
        const std::uint32_t hi0 = mulhi(kPhiloxM0, c0, &lo0);
        const std::uint32_t hi1 = mulhi(kPhiloxM1, c2, &lo1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        const std::uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    block_[0] = c0;
    block_[1] = c1;
    block_[2] = c2;
    block_[3] = c3;
    block_pos_ = 0;
    ++ctr_lo_;
    if (ctr_lo_ == 0) ++ctr_hi_;
}

std::uint64_t Rng::next_u64() {
    if (block_pos_ > 2) refill();
    const std::uint64_t lo = block_[block_pos_];
    const std::uint64_t hi = block_[block_pos_ + 1];
    block_pos_ += 2;
    return (hi << 32) | lo;
}

double Rng::uniform() {
    // 53 significant bits, shifted into (0,1); add half an ulp so 0 is
    // excluded (log/inverse-cdf consumers must never see 0).
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(t);
    has_cached_normal_ = true;
    return r * std::cos(t);
}

double Rng::exponential() { return -std::log(uniform()); }

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("Rng::gamma: shape must be > 0");
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^{1/a}.
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

namespace {

// Stirling-series log(k!) for the PTRD sampler.
inline double log_factorial(long long k) {
    static const double table[] = {0.0,
                                   0.0,
                                   0.6931471805599453,
                                   1.791759469228055,
                                   3.1780538303479458,
                                   4.787491742782046,
                                   6.579251212010101,
                                   8.525161361065415,
                                   10.60460290274525,
                                   12.801827480081469};
    if (k < 10) return table[k];
    const double n = static_cast<double>(k);
    const double n3 = n * n * n;
    return (n + 0.5) * std::log(n) - n + 0.9189385332046727 +
           1.0 / (12.0 * n) - 1.0 / (360.0 * n3);
}

}  // namespace

long long Rng::poisson(double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("Rng::poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // Knuth product-of-uniforms.
        const double l = std::exp(-mean);
        long long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > l);
        return k - 1;
    }
    // PTRD transformed-rejection (Hormann 1993); exact for mean >= 10.
    const double mu = mean;
    const double smu = std::sqrt(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u;
        double v = uniform();
        if (v <= 0.86 * v_r) {
            u = v / v_r - 0.43;
            return static_cast<long long>(
                std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + mu + 0.445));
        }
        if (v >= v_r) {
            u = uniform() - 0.5;
        } else {
            u = v / v_r - 0.93;
            u = (u < 0 ? -0.5 : 0.5) - u;
            v = uniform() * v_r;
        }
        const double us = 0.5 - std::abs(u);
        if (us < 0.013 && v > us) continue;
        const double k =
            std::floor((2.0 * a / us + b) * u + mu + 0.445);
        v = v * inv_alpha / (a / (us * us) + b);
        if (k >= 10.0) {
            if (std::log(v * smu) <=
                (k + 0.5) * std::log(mu / k) - mu -
                    0.9189385332046727 + k -
                    (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k) {
                return static_cast<long long>(k);
            }
        } else if (k >= 0.0) {
            if (std::log(v) <= k * std::log(mu) - mu -
                                   log_factorial(static_cast<long long>(k))) {
                return static_cast<long long>(k);
            }
        }
    }
}

bool Rng::coin() { return (next_u64() & 1ull) != 0; }

}  // namespace lqg
