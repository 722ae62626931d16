#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

namespace dips {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Splits [0, count) into fixed-size chunks and runs fn(chunk_index, begin, end)
// on a worker pool. Results come back indexed by chunk, and the chunk layout
// depends only on count/chunk_size, so any reduction over the returned vector
// is identical for every thread count.
template <class R, class Fn>
std::vector<R> parallel_chunk_map(std::size_t count, std::size_t chunk_size,
                                  unsigned threads, Fn&& fn) {
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t n_chunks = count == 0 ? 0 : (count + chunk_size - 1) / chunk_size;
    std::vector<R> results(n_chunks);
    if (n_chunks == 0) return results;

    const unsigned n_workers = std::min<std::size_t>(resolve_threads(threads), n_chunks);
    if (n_workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t b = c * chunk_size;
            const std::size_t e = std::min(count, b + chunk_size);
            results[c] = fn(c, b, e);
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const std::size_t b = c * chunk_size;
            const std::size_t e = std::min(count, b + chunk_size);
            results[c] = fn(c, b, e);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

// Convenience: run fn(i) for i in [0, count) with no return value.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    parallel_chunk_map<int>(count, 1, threads, [&](std::size_t, std::size_t b, std::size_t) {
        fn(b);
        return 0;
    });
}

}  // namespace dips
