#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

namespace gedwalk::par {

inline int &max_threads_ref() {
    static int t = 1;
    return t;
}

/// Sets the worker count for all subsequent parallel regions. Results are
/// guaranteed to be identical for every setting; only wall time changes.
inline void set_max_threads(int t) {
    max_threads_ref() = std::max(1, t);
}

inline int max_threads() {
    return max_threads_ref();
}

inline bool &inside_parallel_region() {
    thread_local bool flag = false;
    return flag;
}

/// Runs fn(begin, end) over a contiguous partition of [0, n). The partition
/// depends only on n and the configured thread count, never on scheduling,
/// and nested calls degrade to serial execution.
template <typename Fn>
void for_blocks(std::size_t n, Fn &&fn, std::size_t grain = 2048) {
    if (n == 0)
        return;
    const std::size_t want = static_cast<std::size_t>(max_threads());
    const std::size_t workers = std::min(want, (n + grain - 1) / grain);
    if (workers <= 1 || inside_parallel_region()) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&fn, lo, hi] {
            inside_parallel_region() = true;
            fn(lo, hi);
            inside_parallel_region() = false;
        });
    }
    inside_parallel_region() = true;
    fn(std::size_t{0}, std::min(n, chunk));
    inside_parallel_region() = false;
    for (auto &t : pool)
        t.join();
}

} // namespace gedwalk::par
