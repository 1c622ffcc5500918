#pragma once
// Replicate-level worker pool.  Replicates are claimed from a shared counter
// and every result is written to index-addressed storage by the caller, so
// output never depends on how many threads ran or how work interleaved.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fpp {

// FPP_WORKERS is the only environment knob: it supplies the default worker
// count when a caller passes workers = 0.
inline int default_workers() {
    if (const char* env = std::getenv("FPP_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

inline int resolve_workers(int workers) { return workers >= 1 ? workers : default_workers(); }

template <typename Fn>
void parallel_for_index(std::size_t count, int workers, Fn&& fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count || failed.load(std::memory_order_relaxed)) return;
            try {
                fn(i);
            } catch (...) {
                {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const auto nt = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace fpp
