#ifndef GEOMCONC_PARALLEL_HPP
#define GEOMCONC_PARALLEL_HPP

// Deterministic work distribution: tasks are indexed, each task writes only
// its own output slot, and reductions run sequentially over slot index
// afterwards. Outputs are therefore bit-identical for any thread count.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace geomconc {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GEOMCONC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(task_index) for task_index in [0, n_tasks). fn must confine its
// side effects to per-task storage.
template <class Fn>
void parallel_tasks(std::int64_t n_tasks, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (n_tasks <= 0) return;
    if (threads <= 1 || n_tasks == 1) {
        for (std::int64_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    if (static_cast<std::int64_t>(threads) > n_tasks)
        threads = static_cast<int>(n_tasks);

    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::atomic<int> error_guard{0};

    auto worker = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_tasks || failed.load(std::memory_order_relaxed)) return;
            try {
                fn(i);
            } catch (...) {
                if (error_guard.fetch_add(1) == 0) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace geomconc

#endif
