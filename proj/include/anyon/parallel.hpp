#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace anyon {

/// Static contiguous partition of [begin, end) over `threads` workers.
/// Each index is processed by exactly one worker, so bodies that write
/// disjoint outputs give identical results for every thread count.
template <typename Body>
void parallel_for(int begin, int end, int threads, Body&& body) {
    const int count = end - begin;
    if (count <= 0) return;
    const int workers = std::clamp(threads, 1, count);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    const int chunk = (count + workers - 1) / workers;
    for (int w = 1; w < workers; ++w) {
        const int lo = begin + w * chunk, hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (int i = begin; i < std::min(end, begin + chunk); ++i) body(i);
}

} // namespace anyon
