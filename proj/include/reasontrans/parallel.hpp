#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace reasontrans {

/// Applies fn(index) over [0, n) on a bounded worker pool, default one worker
/// per hardware thread. Results are written by index, so output order matches
/// input order regardless of scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn fn, std::size_t concurrency = 0) {
    if (n == 0) {
        return;
    }
    std::size_t workers = concurrency > 0 ? concurrency : std::thread::hardware_concurrency();
    if (workers == 0) {
        workers = 4;
    }
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) {
                    return;
                }
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace reasontrans
