#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "llsc/common.hpp"

namespace llsc::detail {

// Runs fn(i) for every i in [0, n). Work items are claimed atomically, so the
// assignment of items to threads never affects what any single fn(i) computes.
template <class Fn>
void parallel_index_loop(int n, Fn&& fn) {
    const int threads = std::min(max_threads(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int k = 0; k < threads - 1; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

} // namespace llsc::detail
