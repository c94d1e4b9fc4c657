#ifndef DAO_PARALLEL_HPP
#define DAO_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dao {

// Worker count: DAO_THREADS if set, otherwise hardware concurrency.
inline std::size_t default_thread_count() {
    if (const char* env = std::getenv("DAO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace detail {
inline bool& inside_parallel_region() {
    thread_local bool value = false;
    return value;
}

inline std::size_t& thread_override() {
    static std::size_t value = 0;
    return value;
}
} // namespace detail

inline void set_thread_count(std::size_t threads) { detail::thread_override() = threads; }

inline std::size_t thread_count() {
    const std::size_t v = detail::thread_override();
    return v > 0 ? v : default_thread_count();
}

// Runs body(i) for i in [begin, end) over contiguous blocks. Each index is
// handled by exactly one worker, so results written per index do not depend on
// the worker count. Nested calls run serially on the calling worker.
template <typename Body>
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, Body&& body) {
    const std::ptrdiff_t count = end - begin;
    if (count <= 0) {
        return;
    }
    const auto workers = static_cast<std::ptrdiff_t>(
        std::min<std::size_t>(thread_count(), static_cast<std::size_t>(count)));
    if (workers <= 1 || detail::inside_parallel_region()) {
        for (std::ptrdiff_t i = begin; i < end; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::ptrdiff_t block = (count + workers - 1) / workers;
    for (std::ptrdiff_t w = 0; w < workers; ++w) {
        const std::ptrdiff_t lo = begin + w * block;
        const std::ptrdiff_t hi = std::min(end, lo + block);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([&, lo, hi] {
            detail::inside_parallel_region() = true;
            try {
                for (std::ptrdiff_t i = lo; i < hi; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace dao

#endif // DAO_PARALLEL_HPP
