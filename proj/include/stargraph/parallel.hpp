#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace stargraph {

namespace detail {
inline std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{0};
    return cap;
}
}  // namespace detail

/// Caps the number of worker threads used by the library; 0 means "one per
/// hardware thread".
inline void set_worker_threads(int n) { detail::thread_cap().store(std::max(0, n)); }

/// Reads the cap from STARGRAPH_THREADS, if set.
inline void configure_threads_from_env() {
    if (const char* env = std::getenv("STARGRAPH_THREADS")) {
        try {
            set_worker_threads(std::stoi(env));
        } catch (const std::exception&) {
            // ignored: malformed value keeps the default
        }
    }
}

inline int worker_threads() {
    const int cap = detail::thread_cap().load();
    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return cap > 0 ? std::min(cap, hw) : hw;
}

/// Runs body(begin, end) over contiguous chunks of [0, n).
template <typename Body>
void parallel_for(int n, Body&& body) {
    const int workers = std::min(worker_threads(), std::max(1, n / 64));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin < end) {
            pool.emplace_back([&body, begin, end] { body(begin, end); });
        }
    }
}

}  // namespace stargraph
