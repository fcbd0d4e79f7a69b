#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "number_theory.hpp"

namespace primegen {

struct EnsembleParams {
    std::uint32_t pool_limit = 0;    // M
    std::uint32_t system_size = 0;   // N
    std::uint64_t realizations = 0;  // R
    std::uint64_t master_seed = 0;
    std::uint64_t max_sweeps = 1'000'000;
    unsigned workers = 1;            // 0 = one per hardware thread
};

// Aggregates over R independent realizations at fixed (M, N). Truncated runs
// are counted but excluded from every stationarity statistic; when more than
// 0.1% of runs truncate, the result is flagged unreliable. The integer
// accumulators are the ground truth; the doubles are derived from them, so
// results are bit-identical for any worker count.
struct EnsembleStats {
    std::uint32_t pool_limit = 0;
    std::uint32_t system_size = 0;
    std::uint64_t realizations = 0;
    std::uint64_t completed = 0;
    std::uint64_t truncated_runs = 0;
    std::uint64_t all_prime_runs = 0;
    std::uint64_t sum_final_primes = 0;  // over completed runs
    std::uint64_t sum_sweeps = 0;        // over completed runs

    double r_mean = 0;    // mean final prime ratio
    double p = 0;         // fraction of completed runs ending all-prime
    double p_stderr = 0;  // binomial standard error of p
    double tau_raw = 0;   // mean sweeps to stationarity
    double tau = 0;       // tau_raw / N
    bool reliable = true;

    // Final-state value counts over completed runs, sparse and sorted by
    // value; total mass is N * completed.
    std::vector<std::pair<std::uint32_t, std::uint64_t>> histogram;
};

EnsembleStats run_ensemble(const EnsembleParams& params,
                           const PrimeTable& table);

// One EnsembleStats per grid point, N strictly increasing. Realization i of
// grid point N draws its stream from a hash of (master_seed, M, N, i), so
// every row is identical to a standalone run_ensemble at the same (M, N).
struct SweepTable {
    std::uint32_t pool_limit = 0;
    std::uint64_t realizations = 0;
    std::uint64_t master_seed = 0;
    std::vector<EnsembleStats> rows;
};

// Optional progress callback: (rows done, rows total) after each grid point.
using SweepProgress = std::function<void(std::size_t, std::size_t)>;

SweepTable sweep_over_n(std::uint32_t pool_limit,
                        std::span<const std::uint32_t> n_grid,
                        std::uint64_t realizations, std::uint64_t master_seed,
                        std::uint64_t max_sweeps, unsigned workers,
                        const PrimeTable& table,
                        const SweepProgress& progress = {});

}  // namespace primegen
