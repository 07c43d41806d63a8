#include "spectra/parallel.hpp"

#include <algorithm>
#include <mutex>

namespace spectra {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }
int thread_count() { return g_threads.load(); }

void parallel_for_index(size_t n, const std::function<void(size_t)>& fn) {
    const int workers = static_cast<int>(std::min<size_t>(thread_count(), n));
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::pair<size_t, std::exception_ptr>> errors;
    std::mutex err_mu;
    auto body = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                errors.emplace_back(i, std::current_exception());
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::rethrow_exception(errors.front().second);
    }
}

}  // namespace spectra
