#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gaussrough {

/// Worker cap: GAUSSROUGH_THREADS if set, otherwise the hardware count.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("GAUSSROUGH_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, n). Work items must be independent; results must
/// not depend on the schedule (each item owns its output slot and random
/// stream), so parallel and serial runs agree bitwise.
template <class Fn> void parallel_for(std::size_t n, const Fn& fn) {
    const unsigned workers = thread_cap();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += used) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace gaussrough
