#include "symdom/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace symdom::parallel {
namespace {
std::atomic<unsigned> g_threads{1};
}

void set_threads(unsigned count) { g_threads.store(std::max(1u, count)); }

unsigned threads() noexcept { return g_threads.load(); }

void for_each_index(std::uint64_t count, const std::function<void(std::uint64_t)>& body) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads(), count));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace symdom::parallel
