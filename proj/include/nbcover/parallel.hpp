#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nbcover {

/// Deterministic parallel map: job i writes slot i, workers pull indices from
/// an atomic counter. Results are identical for any worker count; reductions
/// over the returned vector must then run in index order.
template <typename R>
std::vector<R> parallel_map(int n_jobs, int threads, const std::function<R(int)>& fn,
                            const std::function<void(int)>& progress = {}) {
    std::vector<R> out(n_jobs);
    if (threads <= 1) {
        for (int i = 0; i < n_jobs; ++i) {
            out[i] = fn(i);
            if (progress) progress(i);
        }
        return out;
    }
    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_jobs) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
            done.fetch_add(1);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    if (progress) {
        int reported = 0;
        while (reported < n_jobs) {
            int d = done.load();
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (error) break;
            }
            while (reported < d) progress(reported++);
            if (d >= n_jobs) break;
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    }
    for (auto& t : pool) t.join();
    {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) std::rethrow_exception(error);
    }
    return out;
}

inline int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace nbcover
