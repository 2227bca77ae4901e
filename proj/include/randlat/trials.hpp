#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "randlat/errors.hpp"

namespace randlat {

struct RunOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
    /// Trials abort with BudgetExceeded once this instant passes.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Runs body(t) for every trial t in [0, n), split into contiguous chunks
/// across workers. body must write only trial-indexed slots, so results do
/// not depend on the worker count.
template <class Body>
void run_trials(std::int64_t n, const RunOptions& options, Body&& body) {
    constexpr std::int64_t kDeadlineStride = 256;
    unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.workers;
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, std::max<std::int64_t>(n, 1)));

    auto chunk = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t t = lo; t < hi; ++t) {
            if (options.deadline && (t - lo) % kDeadlineStride == 0 &&
                std::chrono::steady_clock::now() > *options.deadline)
                throw BudgetExceeded("check exceeded its wall-clock budget");
            body(t);
        }
    };
    if (workers <= 1) {
        chunk(0, n);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t lo = n * w / workers;
        const std::int64_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, w, lo, hi] {
            try {
                chunk(lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace randlat
