#pragma once

#include <cstdint>

namespace lqg {

// Stream identifiers for per-module RNG keying. Every sampler derives its
// stream from (seed, module id, task index), so trials can run in parallel
// in any order and still reproduce bit-exactly.
enum class RngModule : std::uint32_t {
    brownian = 1,
    bessel = 2,
    quadrant = 3,
    stable = 4,
    field = 5,
    sphere = 6,
    stats = 7,
    cli = 8,
    test = 9,
};

// Philox-4x32-10 counter-based generator. The state is a 128-bit counter
// and a 64-bit key; each bump of the counter yields four independent
// 32-bit words. Pure function of (key, counter), no warm-up, cheap to
// fork into independent streams.
class Rng {
  public:
    Rng(std::uint64_t seed, RngModule module, std::uint64_t task_index);

    // Sub-stream for a nested task (e.g. one jump of one excursion).
    Rng fork(std::uint64_t subtask) const;

    std::uint64_t next_u64();
    // Uniform on (0,1): 53-bit mantissa, never returns 0 or 1.
    double uniform();
    // Uniform on (a,b).
    double uniform(double a, double b);
    // Standard normal (Box-Muller, second variate cached).
    double normal();
    // Exponential(1).
    double exponential();
    // Gamma(shape, 1) by Marsaglia-Tsang squeeze.
    double gamma(double shape);
    // Poisson(mean); Knuth product for small mean, PTRD rejection above.
    long long poisson(double mean);
    // Fair coin.
    bool coin();

  private:
    std::uint32_t key_[2];
    std::uint64_t ctr_hi_;
    std::uint64_t ctr_lo_;
    std::uint32_t block_[4];
    int block_pos_;
    double cached_normal_;
    bool has_cached_normal_;

    void refill();
};

}  // namespace lqg
