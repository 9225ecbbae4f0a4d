#include "ergolab/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace ergolab {

namespace {
std::atomic<unsigned> g_threads{1};
thread_local bool t_inside_pool = false;
}

void set_thread_count(unsigned threads) { g_threads = threads == 0 ? 1 : threads; }

unsigned thread_count() { return g_threads; }

void run_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(g_threads.load(), chunks));
    if (workers <= 1 || t_inside_pool) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        const bool was_inside = t_inside_pool;
        t_inside_pool = true;
        struct Restore {
            bool value;
            ~Restore() { t_inside_pool = value; }
        } restore{was_inside};
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                body(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = chunks;
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace ergolab
