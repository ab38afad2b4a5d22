#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "ensp/stats.hpp"

namespace ensp {

inline int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for every i in [0, count) on a small thread pool.  Callers must
// write results into per-index slots; then the outcome does not depend on
// how blocks get scheduled.  The first worker exception is rethrown.
template <class Fn>
void parallel_for(std::int64_t count, int workers, Fn&& fn) {
    if (count <= 0) return;
    workers = std::min<std::int64_t>(resolve_workers(workers), count);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::int64_t block =
        std::max<std::int64_t>(1, count / (static_cast<std::int64_t>(workers) * 8));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        try {
            for (;;) {
                const std::int64_t begin = next.fetch_add(block);
                if (begin >= count) return;
                const std::int64_t end = std::min(begin + block, count);
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Deterministic parallel sum of fn(i) over [0, count): partial sums are kept
// per fixed-size chunk and combined in chunk order, so the value is the same
// for any worker count.
template <class Fn>
double chunked_sum(std::int64_t count, int workers, std::int64_t chunk, Fn&& fn) {
    if (count <= 0) return 0.0;
    chunk = std::max<std::int64_t>(1, chunk);
    const std::int64_t chunks = (count + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
    parallel_for(chunks, workers, [&](std::int64_t c) {
        const std::int64_t begin = c * chunk;
        const std::int64_t end = std::min(begin + chunk, count);
        NeumaierSum s;
        for (std::int64_t i = begin; i < end; ++i) s.add(fn(i));
        partial[static_cast<std::size_t>(c)] = s.value();
    });
    NeumaierSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

}  // namespace ensp
