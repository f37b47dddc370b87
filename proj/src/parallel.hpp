#pragma once
#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace subspectra::detail {

// Runs body(begin, end) on contiguous chunks of [0, n) using up to `jobs` threads.
template <class Body>
void parallel_chunks(std::size_t n, int jobs, Body body) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs > 0 ? jobs : 1, n));
    if (workers == 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=, &body] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace subspectra::detail
