#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace netinfer {

/// Worker count from an explicit request, falling back to NETINFER_THREADS, then 1.
std::size_t resolve_thread_count(std::size_t requested);

/**
 * Calls fn(i) for i in [0, count) on at most `threads` workers. Each index runs
 * exactly once; results must be written to index-owned slots. If any call throws,
 * the exception of the lowest failing index is rethrown after all workers join.
 */
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (count == 0) return;
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, count);
    std::vector<std::exception_ptr> errors(count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace netinfer
