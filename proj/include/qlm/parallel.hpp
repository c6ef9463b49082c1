#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qlm {

/// Worker count: hardware concurrency capped by the QLM_THREADS env var.
inline int worker_count() {
    int n = int(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("QLM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

/// Parallel loop over [0, count). Chunks are fixed by index so any
/// per-chunk accumulation combined in chunk order is deterministic.
inline void parallel_for(size_t count, const std::function<void(size_t, size_t)>& body_range,
                         size_t min_grain = 4096) {
    const int workers = worker_count();
    if (workers == 1 || count < min_grain) {
        body_range(0, count);
        return;
    }
    const size_t chunk = (count + size_t(workers) - 1) / size_t(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        const size_t lo = size_t(w) * chunk;
        if (lo >= count) break;
        const size_t hi = std::min(count, lo + chunk);
        threads.emplace_back([&body_range, lo, hi] { body_range(lo, hi); });
    }
    for (auto& t : threads) t.join();
}

/// Deterministic parallel sum of term(i) over [0, count): fixed chunking,
/// chunk partials combined in index order.
inline double parallel_sum(size_t count, const std::function<double(size_t)>& term) {
    const int workers = worker_count();
    const size_t min_chunk = 4096;
    size_t nchunks = std::max<size_t>(1, std::min(size_t(workers) * 4, count / min_chunk + 1));
    const size_t chunk = (count + nchunks - 1) / std::max<size_t>(nchunks, 1);
    nchunks = (count + chunk - 1) / std::max<size_t>(chunk, 1);
    std::vector<double> partial(nchunks, 0.0);
    parallel_for(nchunks, [&](size_t clo, size_t chi) {
        for (size_t c = clo; c < chi; ++c) {
            double s = 0.0;
            const size_t lo = c * chunk, hi = std::min(count, lo + chunk);
            for (size_t i = lo; i < hi; ++i) s += term(i);
            partial[c] = s;
        }
    }, 2);
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace qlm
