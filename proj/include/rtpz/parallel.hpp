#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace rtpz::par {

// Evaluates fn(0..count-1) with the given number of worker threads and
// returns the results in index order, so downstream reductions are identical
// for every worker count.
template <typename T, typename Fn>
std::vector<T> parallel_map(long count, int workers, Fn&& fn) {
    std::vector<T> out(static_cast<size_t>(count));
    if (workers <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) out[static_cast<size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<long> next{0};
    auto drain = [&] {
        for (;;) {
            const long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            out[static_cast<size_t>(i)] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<long>(workers, count));
    pool.reserve(static_cast<size_t>(spawn));
    for (int w = 1; w < spawn; ++w) pool.emplace_back(drain);
    drain();
    for (std::thread& th : pool) th.join();
    return out;
}

} // namespace rtpz::par
