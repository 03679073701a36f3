#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace rnnhl {

// Runs fn(0..n-1) across at most `jobs` threads. Results must be written to
// per-index slots by the caller; chunking is contiguous, so output ordering
// never depends on the pool size.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (jobs <= 1 || n == 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    const int workers = std::min(jobs, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int k = w; k < n; k += workers) fn(k);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace rnnhl
