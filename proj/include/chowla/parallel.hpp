// Static chunking over a range of indices. Callers gather per-chunk partials
// and reduce them in chunk order, which keeps every result independent of the
// thread count.
#pragma once

#include <thread>
#include <vector>

namespace chowla {

// Invokes fn(chunk_index, lo, hi) for a partition of [lo, hi) into at most
// `threads` contiguous chunks. chunk boundaries depend only on (lo, hi,
// threads), never on scheduling.
template <typename Fn>
void parallel_chunks(long long lo, long long hi, int threads, Fn&& fn) {
    if (hi <= lo) return;
    long long total = hi - lo;
    int n = threads < 1 ? 1 : threads;
    if (static_cast<long long>(n) > total) n = static_cast<int>(total);
    if (n == 1) {
        fn(0, lo, hi);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n));
    long long chunk = total / n, extra = total % n;
    long long start = lo;
    for (int i = 0; i < n; ++i) {
        long long len = chunk + (i < extra ? 1 : 0);
        long long a = start, b = start + len;
        start = b;
        pool.emplace_back([i, a, b, &fn] { fn(i, a, b); });
    }
    for (auto& t : pool) t.join();
}

inline int chunk_count(long long lo, long long hi, int threads) {
    if (hi <= lo) return 0;
    long long total = hi - lo;
    int n = threads < 1 ? 1 : threads;
    if (static_cast<long long>(n) > total) n = static_cast<int>(total);
    return n;
}

}  // namespace chowla
