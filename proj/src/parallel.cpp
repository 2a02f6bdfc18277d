#include "eprsim/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace eprsim {

void parallel_for_chunks(
    std::uint64_t total, std::size_t max_threads,
    const std::function<void(std::uint64_t, std::uint64_t, std::size_t)> &fn) {
    if (total == 0) {
        return;
    }
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) {
        hw = 1;
    }
    std::size_t threads = max_threads == 0 ? hw : max_threads;
    threads = std::min<std::uint64_t>(threads, total);
    if (threads <= 1 || total < 256) {
        fn(0, total, 0);
        return;
    }
    const std::uint64_t chunk = (total + threads - 1) / threads;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(total, begin + chunk);
        if (begin >= end) {
            break;
        }
        workers.emplace_back([&fn, begin, end, t] { fn(begin, end, t); });
    }
    for (auto &w : workers) {
        w.join();
    }
}

} // namespace eprsim
