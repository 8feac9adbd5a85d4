#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace linkgraph {

// 0 means "use available parallelism".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs body(begin, end, worker) over [0, count) split into contiguous chunks, one per
// worker. The caller is responsible for making the reduction order independent of the
// chunking; everything in this library either writes disjoint slots or reduces integers.
template <class Body>
void parallel_chunks(std::size_t count, unsigned threads, Body &&body) {
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        body(std::size_t{0}, count, 0u);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t step = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(count, w * step);
        const std::size_t end = std::min(count, begin + step);
        pool.emplace_back([&, begin, end, w] {
            try {
                body(begin, end, static_cast<unsigned>(w));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body &&body) {
    parallel_chunks(count, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) body(i);
    });
}

} // namespace linkgraph
