#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace perifsi {

// Worker count from PERIFSI_THREADS (default: hardware concurrency).
int worker_threads();

// Runs body(i) for i in [0, n) on up to worker_threads() threads. The first
// exception thrown by any task is rethrown after all workers stop.
template <class Body>
void parallel_for(int n, Body&& body) {
    const int workers = std::min(worker_threads(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    auto run = [&] {
        for (int i; (i = next++) < n;) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_lock);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace perifsi
