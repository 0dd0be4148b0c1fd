#ifndef GLMSEL_HARNESS_PARALLEL_HPP
#define GLMSEL_HARNESS_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace glmsel::harness {

/**
 * Evaluates `task(i)` for i in [0, count) on up to `workers` threads and
 * returns the results indexed by i, so the output never depends on which
 * thread finished first. The first exception thrown by any task is rethrown.
 */
template <class Task>
auto parallel_map(std::size_t count, unsigned workers, Task task) {
    using Result = decltype(task(std::size_t{0}));
    std::vector<Result> results(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                results[i] = task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), count));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace glmsel::harness

#endif  // GLMSEL_HARNESS_PARALLEL_HPP
