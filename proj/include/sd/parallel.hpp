#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sd {

/// Worker count: hardware concurrency capped by SD_THREADS (>=1).
inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("SD_THREADS")) {
        long cap = std::atol(env);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

/// Runs body(i) for i in [0, n) on a fixed interleaved index split. Results
/// must be written to per-index slots; the caller then reduces them in index
/// order, so the outcome is byte-identical for any thread count.
inline void parallel_for(size_t n, const std::function<void(size_t)>& body) {
    unsigned workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace sd
