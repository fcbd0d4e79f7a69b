#include "reactor.hpp"

#include <algorithm>
#include <stdexcept>

namespace primegen {

namespace {

void validate_run_inputs(std::uint32_t pool_limit, std::uint32_t system_size,
                         const PrimeTable& table) {
    if (pool_limit < 3) {
        throw std::invalid_argument("pool limit must be at least 3");
    }
    if (system_size < 2) {
        throw std::invalid_argument("system size must be at least 2");
    }
    if (table.limit() < pool_limit) {
        throw std::invalid_argument("prime table smaller than pool limit");
    }
}

std::uint64_t count_primes(std::span<const std::uint32_t> values,
                           const PrimeTable& table) {
    std::uint64_t count = 0;
    for (const std::uint32_t v : values) {
        count += table.is_prime(v) ? 1 : 0;
    }
    return count;
}

}  // namespace

CollisionOutcome collide(std::uint32_t a, std::uint32_t b) {
    if (a < 2 || b < 2) {
        throw std::invalid_argument("collide: values must be at least 2");
    }
    CollisionOutcome out;
    if (a == b) {
        out.kind = CollisionKind::elastic_equal;
        return out;
    }
    const std::uint32_t hi = std::max(a, b);
    const std::uint32_t lo = std::min(a, b);
    if (hi % lo != 0) {
        out.kind = CollisionKind::elastic_nondivisible;
        return out;
    }
    out.kind = CollisionKind::reaction;
    out.replaced_slot = a > b ? 0 : 1;
    out.new_value = hi / lo;
    return out;
}

SystemState init_state(std::uint32_t pool_limit, std::uint32_t system_size,
                       RandomStream& rng, const PrimeTable& table) {
    validate_run_inputs(pool_limit, system_size, table);
    SystemState state;
    state.pool_limit = pool_limit;
    state.values.resize(system_size);
    for (auto& v : state.values) {
        v = rng.range(2, pool_limit);
    }
    state.prime_count = count_primes(state.values, table);
    return state;
}

SystemState make_state(std::uint32_t pool_limit,
                       std::vector<std::uint32_t> values,
                       const PrimeTable& table) {
    if (pool_limit < 3 || table.limit() < pool_limit) {
        throw std::invalid_argument("make_state: bad pool limit");
    }
    for (const std::uint32_t v : values) {
        if (v < 2 || v > pool_limit) {
            throw std::invalid_argument("make_state: value outside [2, pool limit]");
        }
    }
    SystemState state;
    state.pool_limit = pool_limit;
    state.values = std::move(values);
    state.prime_count = count_primes(state.values, table);
    return state;
}

bool contains_reactive_pair(std::span<const std::uint32_t> values) {
    thread_local std::vector<std::uint32_t> distinct;
    distinct.assign(values.begin(), values.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    const std::size_t u = distinct.size();
    if (u < 2) return false;
    const std::uint32_t largest = distinct.back();
    for (std::size_t i = 0; i + 1 < u; ++i) {
        const std::uint32_t b = distinct[i];
        // Multiples of b are >= 2b; once 2b overshoots the largest value,
        // no later divisor candidate can have a multiple present either.
        if (2ULL * b > largest) break;
        for (std::size_t j = i + 1; j < u; ++j) {
            if (distinct[j] % b == 0) return true;
        }
    }
    return false;
}

bool is_frozen(const SystemState& state, const PrimeTable& table) {
    if (table.limit() < state.pool_limit) {
        throw std::invalid_argument("is_frozen: prime table smaller than pool limit");
    }
    if (state.prime_count == state.values.size()) return true;
    return !contains_reactive_pair(state.values);
}

std::uint64_t sweep(SystemState& state, RandomStream& rng,
                    const PrimeTable& table) {
    const auto n = static_cast<std::uint32_t>(state.values.size());
    std::uint64_t reactions = 0;
    for (std::uint32_t step = 0; step < n; ++step) {
        const std::uint32_t i = rng.below(n);
        std::uint32_t j = rng.below(n - 1);
        if (j >= i) ++j;  // two distinct positions, uniform over ordered pairs
        const CollisionOutcome out = collide(state.values[i], state.values[j]);
        if (out.kind != CollisionKind::reaction) continue;
        const std::uint32_t target = out.replaced_slot == 0 ? i : j;
        // The replaced value had a divisor in [2, value/2], so it was
        // composite; the prime count can only grow here.
        state.values[target] = out.new_value;
        state.prime_count += table.is_prime(out.new_value) ? 1 : 0;
        ++reactions;
    }
    return reactions;
}

RunRecord run_to_stationarity(std::uint32_t pool_limit,
                              std::uint32_t system_size, RandomStream& rng,
                              const PrimeTable& table,
                              const RunOptions& options) {
    validate_run_inputs(pool_limit, system_size, table);
    if (options.max_sweeps < 1) {
        throw std::invalid_argument("max_sweeps must be at least 1");
    }

    RunRecord record;
    record.final_state = init_state(pool_limit, system_size, rng, table);
    SystemState& state = record.final_state;

    bool frozen = false;
    while (record.sweeps < options.max_sweeps) {
        const std::uint64_t reacted = sweep(state, rng, table);
        record.reactions_total += reacted;
        ++record.sweeps;
        if (options.record_series) {
            record.reactions_cumulative.push_back(record.reactions_total);
            record.prime_ratio_series.push_back(
                static_cast<double>(state.prime_count) /
                static_cast<double>(system_size));
        }
        // A reaction-free sweep leaves the state untouched, so the previous
        // verdict (necessarily "not frozen", or we would have stopped) holds.
        if (record.sweeps == 1 || reacted > 0) {
            frozen = is_frozen(state, table);
        }
        if (frozen) break;
    }
    record.truncated = !frozen;
    record.all_primes = state.prime_count == state.values.size();
    return record;
}

}  // namespace primegen
