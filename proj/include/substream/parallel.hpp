#pragma once

// Bounded worker pool for embarrassingly parallel trial loops. The pool size
// is capped by the SUBSTREAM_THREADS environment variable (default: logical
// core count). Work items are indexed, so callers keep deterministic output
// by writing into index-addressed slots.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace substream {

inline int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("SUBSTREAM_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) n = std::min(n, cap);
        } catch (...) {
            // ignore malformed values, keep the default
        }
    }
    return n;
}

/// Runs fn(i) for i in [0, count) on a bounded pool; rethrows the first error.
inline void parallel_for_index(int count, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    const int threads = std::min(worker_count(), count);
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace substream
