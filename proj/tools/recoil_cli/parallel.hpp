#pragma once

// Ordered parallel map over sweep points.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace recoil::cli {

/// Worker count from RECOIL_THREADS, else the hardware concurrency.
inline unsigned thread_count() {
    if (const char* env = std::getenv("RECOIL_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 1) return static_cast<unsigned>(std::min(n, 256L));
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = fn(i) for i < n.  Each slot is written by exactly one worker, so the result is
/// independent of scheduling; fn must not throw.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& fn, unsigned threads = thread_count()) {
    std::vector<R> out(n);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
            });
        }
    }  // joined
    return out;
}

}  // namespace recoil::cli
