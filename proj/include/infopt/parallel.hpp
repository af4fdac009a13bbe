#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace infopt {

[[nodiscard]] inline int resolve_workers(int requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(begin, end) over [0, count) in contiguous chunks, one per worker.
// Callers write results into per-index slots, so the split never shows up in
// the output.
template <typename Body>
void parallel_chunks(std::size_t count, int workers, const Body& body) {
    const auto n_workers = static_cast<std::size_t>(std::max(1, resolve_workers(workers)));
    if (n_workers == 1 || count < 2) {
        body(std::size_t{0}, count);
        return;
    }
    const std::size_t chunk = (count + n_workers - 1) / n_workers;
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> failures(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

}  // namespace infopt
