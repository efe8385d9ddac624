#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ellipsec {

/// Runs body(i) for i in [begin, end) on up to `threads` workers.  Each index
/// is processed exactly once and results must be written to per-index slots,
/// which keeps outputs independent of the thread count and interleaving.
template <typename Body>
void parallel_for(long begin, long end, int threads, Body&& body) {
    const long count = end - begin;
    if (count <= 0) return;
    int workers = threads;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<long>(workers, count));
    if (workers == 1) {
        for (long i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::mutex error_mutex;
    std::exception_ptr error;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (long i = begin + w; i < end; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace ellipsec
