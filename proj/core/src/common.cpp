#include "lab/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace lab {

std::size_t thread_count() {
    static const std::size_t cached = [] {
        if (const char* env = std::getenv("LAB_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return static_cast<std::size_t>(v);
        }
        unsigned hw = std::thread::hardware_concurrency();
        return static_cast<std::size_t>(hw ? hw : 1);
    }();
    return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(begin + chunk, n);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace lab
