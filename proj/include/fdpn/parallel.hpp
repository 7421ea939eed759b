// SPDX-License-Identifier: Apache-2.0
#ifndef FDPN_PARALLEL_HPP
#define FDPN_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fdpn {

/// Worker count for trial dispatch: FDPN_WORKERS if set, else hardware
/// concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("FDPN_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v > 256 ? 256 : v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(0..n-1) on a small worker pool. Results must be written to
/// per-index slots by the caller so the outcome does not depend on
/// scheduling. The first exception is rethrown after the pool drains.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!first_error) first_error = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fdpn

#endif
