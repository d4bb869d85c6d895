#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace herm {

// Runs body(chunk_index, begin, end) over [0, total) split into a FIXED
// number of chunks (256, independent of the thread count), dispatched to
// `threads` workers through an atomic ticket. Results must be written into
// per-chunk slots and combined by the caller in chunk order; that plus the
// fixed chunk geometry is what makes every reduction reproduce bitwise no
// matter how many threads run.
template <class F>
void parallel_chunks(std::int64_t total, int threads, F&& body) {
    constexpr std::int64_t kChunks = 256;
    if (total <= 0) return;
    const std::int64_t n_chunks = std::min<std::int64_t>(kChunks, total);

    auto chunk_bounds = [&](std::int64_t c) {
        const std::int64_t begin = total * c / n_chunks;
        const std::int64_t end = total * (c + 1) / n_chunks;
        return std::pair<std::int64_t, std::int64_t>{begin, end};
    };

    if (threads <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            const auto [begin, end] = chunk_bounds(c);
            body(c, begin, end);
        }
        return;
    }

    std::atomic<std::int64_t> ticket{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t c = ticket.fetch_add(1);
            if (c >= n_chunks) return;
            const auto [begin, end] = chunk_bounds(c);
            body(c, begin, end);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads - 1));
    for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
}

} // namespace herm
