#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace survtest {

// Static block partition of [0, count). Each index is processed exactly once
// and results must be written to per-index slots, so the outcome is identical
// for any thread count.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < count; i += nt) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace survtest
