#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace fbflow {

/// Parallel map over [0, n): each index writes only its own output slot, so
/// reductions done afterwards in index order are deterministic regardless of
/// the worker count.
inline void parallel_for(int64_t n, int workers, const std::function<void(int64_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    int nw = std::min<int64_t>(workers, n);
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int64_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace fbflow
