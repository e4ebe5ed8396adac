#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace mcsl {

/// Resolves a requested thread count: 0 means "use all hardware threads".
inline unsigned resolve_thread_count(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, count) split into contiguous chunks, one per
/// thread. Each index owns its output slot, so the result is independent of
/// the schedule; callers rely on this for thread-count-invariant output.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& body) {
    threads = resolve_thread_count(threads);
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    if (threads > count) threads = static_cast<unsigned>(count);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = lo + chunk < count ? lo + chunk : count;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// Compensated (Kahan) accumulator for the Monte-Carlo averaging loops.
/// Keeps the rounding error of a length-N sum at O(eps) instead of
/// O(N eps), which the max-principle and constant-preservation checks need.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace mcsl
