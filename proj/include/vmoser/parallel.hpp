#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace vmoser {

/// Global worker cap. 0 means "decide from the environment".
inline unsigned& detail_thread_cap() {
    static unsigned cap = 0;
    return cap;
}

inline void set_thread_cap(unsigned n) { detail_thread_cap() = n; }

/// Effective worker count: explicit cap, else VORTEX_MOSER_THREADS, else hardware.
inline unsigned thread_count() {
    if (unsigned cap = detail_thread_cap(); cap > 0) return cap;
    if (const char* env = std::getenv("VORTEX_MOSER_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Static block split of [0, n). body(i) runs exactly once per index; workers own
/// disjoint contiguous ranges, so results are independent of the worker count as
/// long as body writes only to index-i state.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    unsigned workers = thread_count();
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Fixed-shape pairwise tree reduction; the result depends only on the addend
/// sequence, never on the worker count.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

}  // namespace vmoser
