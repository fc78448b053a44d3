#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace posmt
{
    /// Runs body(i) for i in [0, count) on up to jobs threads. Results must be
    /// written to per-index slots so that the outcome does not depend on jobs.
    /// The exception of the lowest failing index is rethrown.
    template <typename Body>
    auto parallel_for(std::size_t count, int jobs, Body && body) -> void
    {
        std::size_t workers = std::min<std::size_t>(count, std::size_t(std::max(jobs, 1)));
        if (workers <= 1) {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }
        std::vector<std::exception_ptr> errors(count);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                }
                catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < workers; ++t)
            threads.emplace_back(work);
        for (auto & t : threads)
            t.join();
        for (auto & e : errors)
            if (e)
                std::rethrow_exception(e);
    }
}
