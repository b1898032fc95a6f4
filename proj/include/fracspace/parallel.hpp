#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace fracspace {

// Process-wide cap on worker threads. The CLI sets it from --threads or
// FRACSPACE_THREADS; 1 disables spawning. Results never depend on the cap:
// every parallel loop writes into index-addressed slots and reduces in
// index order.
inline std::atomic<int>& thread_cap_storage() {
    static std::atomic<int> cap{0};
    return cap;
}

inline int thread_cap() {
    int c = thread_cap_storage().load();
    if (c > 0) return c;
    if (const char* env = std::getenv("FRACSPACE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

inline void set_thread_cap(int cap) { thread_cap_storage().store(cap); }

// Runs fn(i) for i in [0, count); fn must only write to slots it owns.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, thread_cap())), count);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace fracspace
