#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace lqg {

// Deterministic parallel map: body(i) must depend only on i (plus its own
// per-index RNG stream). Results land in slot i, so the output is
// byte-identical for any thread count. Work is handed out through a shared
// atomic cursor; order of execution is irrelevant by construction.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int nt = std::min<std::size_t>(threads, n);
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace lqg
