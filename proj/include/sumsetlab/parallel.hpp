#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sumsetlab {

// Worker count resolution: requested > 0 wins (still capped by the
// SUMSETLAB_THREADS environment variable when that is positive); requested
// <= 0 means auto (env var if positive, else hardware concurrency).
inline int resolve_threads(int requested) {
    int cap = 0;
    if (const char* env = std::getenv("SUMSETLAB_THREADS")) {
        cap = std::atoi(env);
    }
    int threads = requested;
    if (threads <= 0) {
        threads = cap > 0 ? cap : static_cast<int>(std::thread::hardware_concurrency());
    } else if (cap > 0 && cap < threads) {
        threads = cap;
    }
    return threads > 0 ? threads : 1;
}

// Run body(i) for i in [0, total) across the given number of workers. Indices
// are handed out through a shared counter, so the assignment of index to
// worker varies between runs — the body must write results into per-index
// slots for the caller to aggregate. The first exception thrown by any worker
// is rethrown here after all workers join.
inline void parallel_for_index(std::int64_t total, int threads,
                               const std::function<void(std::int64_t)>& body) {
    if (total <= 0) return;
    threads = std::max(1, threads);
    if (threads == 1 || total == 1) {
        for (std::int64_t i = 0; i < total; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= total) return;
            try {
                body(i);
            } catch (...) {
                {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
                next.store(total, std::memory_order_relaxed);  // drain remaining work
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::int64_t>(threads, total));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace sumsetlab
