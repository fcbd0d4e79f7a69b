#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "number_theory.hpp"
#include "rng.hpp"

namespace primegen {

// The evolving pool of N integers, each drawn from {2..M}. prime_count is a
// cached count of prime entries, maintained incrementally by sweep().
struct SystemState {
    std::uint32_t pool_limit = 0;
    std::vector<std::uint32_t> values;
    std::uint64_t prime_count = 0;
};

enum class CollisionKind {
    elastic_equal,          // equal values never react
    elastic_nondivisible,   // distinct, but smaller does not divide larger
    reaction,               // larger replaced by larger / smaller
};

struct CollisionOutcome {
    CollisionKind kind = CollisionKind::elastic_nondivisible;
    int replaced_slot = -1;       // 0 = first argument, 1 = second, -1 = none
    std::uint32_t new_value = 0;  // larger / smaller, set only on reaction
};

// Outcome of one pair collision. Equality is checked before divisibility, so
// collide(k, k) is elastic even though k | k. Both arguments must be >= 2.
CollisionOutcome collide(std::uint32_t a, std::uint32_t b);

// Fresh pool: n values drawn i.i.d. uniformly from {2..pool_limit}, with
// replacement. Requires pool_limit >= 3, n >= 2, table.limit() >= pool_limit.
SystemState init_state(std::uint32_t pool_limit, std::uint32_t system_size,
                       RandomStream& rng, const PrimeTable& table);

// Builds a state from explicit values (tests, forced configurations).
// Validates that every value lies in [2, pool_limit] and counts primes.
SystemState make_state(std::uint32_t pool_limit,
                       std::vector<std::uint32_t> values,
                       const PrimeTable& table);

// True iff the multiset contains an ordered pair (a, b), a > b, with b | a.
// Multiplicity is irrelevant, so the scan runs over distinct values.
bool contains_reactive_pair(std::span<const std::uint32_t> values);

// A state is frozen when every possible collision is elastic. All-prime
// states are always frozen (a prime is never a multiple of a smaller value
// in range). Requires table.limit() >= state.pool_limit.
bool is_frozen(const SystemState& state, const PrimeTable& table);

// One time step: N pair draws, each picking two distinct positions uniformly
// (equal values at different positions still collide, elastically). Reactions
// apply in place, so later draws in the same sweep see earlier replacements.
// Returns the number of reactions performed.
std::uint64_t sweep(SystemState& state, RandomStream& rng,
                    const PrimeTable& table);

struct RunOptions {
    std::uint64_t max_sweeps = 1'000'000;
    // When set, RunRecord carries per-sweep cumulative reactions and the
    // per-sweep prime ratio. Off in the ensemble hot path.
    bool record_series = false;
};

struct RunRecord {
    SystemState final_state;
    std::uint64_t sweeps = 0;           // t: sweeps performed, always >= 1
    std::uint64_t reactions_total = 0;
    bool all_primes = false;
    bool truncated = false;             // hit max_sweeps before freezing
    std::vector<std::uint64_t> reactions_cumulative;
    std::vector<double> prime_ratio_series;
};

// Sweeps until the state freezes or max_sweeps is reached. The frozen check
// runs after every sweep, but a sweep with zero reactions cannot change the
// state, so the check is only recomputed after reactive sweeps. Truncation
// is reported explicitly, never conflated with stationarity.
RunRecord run_to_stationarity(std::uint32_t pool_limit,
                              std::uint32_t system_size, RandomStream& rng,
                              const PrimeTable& table,
                              const RunOptions& options = {});

}  // namespace primegen
