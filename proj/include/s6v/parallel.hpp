#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace s6v {

/// Evaluates f(0..n-1) on up to `workers` threads. Results are stored by
/// index, so the output does not depend on the worker count.
template <class F>
auto parallel_map(std::size_t n, unsigned workers, F&& f) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(n);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t k = 0; k < n; ++k)
            out[k] = f(k);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                out[k] = f(k);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(body);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace s6v
