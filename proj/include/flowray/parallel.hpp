#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace flowray {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : int(h);
}

// Runs fn(i) for i in [0, n). Each index must write only its own output slot,
// so results do not depend on the thread count. If several indices throw, the
// exception from the lowest index is rethrown.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn, std::size_t chunk = 1) {
    const int nt = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    chunk = std::max<std::size_t>(chunk, 1);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t err_idx = std::numeric_limits<std::size_t>::max();
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(chunk);
            if (b >= n) return;
            std::size_t e = std::min(n, b + chunk);
            for (std::size_t i = b; i < e; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (i < err_idx) {
                        err_idx = i;
                        err = std::current_exception();
                    }
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace flowray
