#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace primegen {

// Runs body(accumulator, index) for every index in [0, total) across the
// given number of workers, then folds the per-worker accumulators with
// merge(target, source). Work is handed out in chunks from a shared atomic
// cursor. Accumulators must be mergeable in any order (integer sums here),
// which is what keeps results identical for every worker count.
template <typename Acc, typename Body, typename Merge>
Acc parallel_reduce(std::uint64_t total, unsigned workers, Body body,
                    Merge merge) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }

    if (workers == 1 || total <= 1) {
        Acc acc{};
        for (std::uint64_t i = 0; i < total; ++i) {
            body(acc, i);
        }
        return acc;
    }

    constexpr std::uint64_t kChunk = 16;
    std::atomic<std::uint64_t> cursor{0};
    std::mutex result_mutex;
    Acc result{};
    std::exception_ptr first_error;

    auto worker = [&] {
        Acc local{};
        try {
            for (;;) {
                const std::uint64_t begin =
                    cursor.fetch_add(kChunk, std::memory_order_relaxed);
                if (begin >= total) break;
                const std::uint64_t end = std::min(begin + kChunk, total);
                for (std::uint64_t i = begin; i < end; ++i) {
                    body(local, i);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(result_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
        }
        std::lock_guard<std::mutex> lock(result_mutex);
        merge(result, std::move(local));
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back(worker);
    }
    for (auto& t : threads) {
        t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

}  // namespace primegen
