#include "ensemble.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"
#include "reactor.hpp"
#include "rng.hpp"

namespace primegen {

namespace {

struct Accumulator {
    std::uint64_t completed = 0;
    std::uint64_t truncated = 0;
    std::uint64_t all_prime = 0;
    std::uint64_t sum_final_primes = 0;
    std::uint64_t sum_sweeps = 0;
    std::vector<std::uint64_t> value_counts;  // index = value, size M + 1

    void merge(Accumulator&& other) {
        completed += other.completed;
        truncated += other.truncated;
        all_prime += other.all_prime;
        sum_final_primes += other.sum_final_primes;
        sum_sweeps += other.sum_sweeps;
        if (value_counts.empty()) {
            value_counts = std::move(other.value_counts);
        } else {
            for (std::size_t v = 0; v < other.value_counts.size(); ++v) {
                value_counts[v] += other.value_counts[v];
            }
        }
    }
};

void validate_params(const EnsembleParams& params, const PrimeTable& table) {
    if (params.pool_limit < 3) {
        throw std::invalid_argument("pool limit must be at least 3");
    }
    if (params.system_size < 2) {
        throw std::invalid_argument("system size must be at least 2");
    }
    if (params.realizations < 1) {
        throw std::invalid_argument("realizations must be at least 1");
    }
    if (params.max_sweeps < 1) {
        throw std::invalid_argument("max_sweeps must be at least 1");
    }
    if (table.limit() < params.pool_limit) {
        throw std::invalid_argument("prime table smaller than pool limit");
    }
}

}  // namespace

EnsembleStats run_ensemble(const EnsembleParams& params,
                           const PrimeTable& table) {
    validate_params(params, table);

    RunOptions options;
    options.max_sweeps = params.max_sweeps;
    options.record_series = false;

    Accumulator total = parallel_reduce<Accumulator>(
        params.realizations, params.workers,
        [&](Accumulator& acc, std::uint64_t i) {
            if (acc.value_counts.empty()) {
                acc.value_counts.assign(params.pool_limit + 1, 0);
            }
            RandomStream rng(substream_seed(params.master_seed,
                                            params.pool_limit,
                                            params.system_size, i));
            const RunRecord run = run_to_stationarity(
                params.pool_limit, params.system_size, rng, table, options);
            if (run.truncated) {
                ++acc.truncated;
                return;
            }
            ++acc.completed;
            acc.sum_sweeps += run.sweeps;
            acc.sum_final_primes += run.final_state.prime_count;
            acc.all_prime += run.all_primes ? 1 : 0;
            for (const std::uint32_t v : run.final_state.values) {
                ++acc.value_counts[v];
            }
        },
        [](Accumulator& into, Accumulator&& from) {
            into.merge(std::move(from));
        });

    EnsembleStats stats;
    stats.pool_limit = params.pool_limit;
    stats.system_size = params.system_size;
    stats.realizations = params.realizations;
    stats.completed = total.completed;
    stats.truncated_runs = total.truncated;
    stats.all_prime_runs = total.all_prime;
    stats.sum_final_primes = total.sum_final_primes;
    stats.sum_sweeps = total.sum_sweeps;
    stats.reliable = total.truncated * 1000 <= params.realizations;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (total.completed == 0) {
        stats.r_mean = nan;
        stats.p = nan;
        stats.p_stderr = nan;
        stats.tau_raw = nan;
        stats.tau = nan;
        stats.reliable = false;
    } else {
        const auto completed = static_cast<double>(total.completed);
        stats.r_mean = static_cast<double>(total.sum_final_primes) /
                       (completed * params.system_size);
        stats.p = static_cast<double>(total.all_prime) / completed;
        stats.p_stderr = std::sqrt(stats.p * (1.0 - stats.p) / completed);
        stats.tau_raw = static_cast<double>(total.sum_sweeps) / completed;
        stats.tau = stats.tau_raw / params.system_size;
    }

    if (!total.value_counts.empty()) {
        for (std::uint32_t v = 2; v <= params.pool_limit; ++v) {
            if (total.value_counts[v] > 0) {
                stats.histogram.emplace_back(v, total.value_counts[v]);
            }
        }
    }
    return stats;
}

SweepTable sweep_over_n(std::uint32_t pool_limit,
                        std::span<const std::uint32_t> n_grid,
                        std::uint64_t realizations, std::uint64_t master_seed,
                        std::uint64_t max_sweeps, unsigned workers,
                        const PrimeTable& table,
                        const SweepProgress& progress) {
    if (n_grid.empty()) {
        throw std::invalid_argument("sweep_over_n: empty N grid");
    }
    for (std::size_t k = 1; k < n_grid.size(); ++k) {
        if (n_grid[k] <= n_grid[k - 1]) {
            throw std::invalid_argument(
                "sweep_over_n: N grid must be strictly increasing");
        }
    }

    SweepTable out;
    out.pool_limit = pool_limit;
    out.realizations = realizations;
    out.master_seed = master_seed;
    out.rows.reserve(n_grid.size());

    EnsembleParams params;
    params.pool_limit = pool_limit;
    params.realizations = realizations;
    params.master_seed = master_seed;
    params.max_sweeps = max_sweeps;
    params.workers = workers;
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
        params.system_size = n_grid[k];
        out.rows.push_back(run_ensemble(params, table));
        if (progress) progress(k + 1, n_grid.size());
    }
    return out;
}

}  // namespace primegen
