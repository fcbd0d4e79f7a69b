#pragma once

#include <cstdint>
#include <vector>

namespace primegen {

// Primality lookup for all integers in [0, limit], backed by a sieve of
// Eratosthenes. Built once per pool size and shared read-only afterwards.
class PrimeTable {
public:
    // limit >= 2, otherwise std::invalid_argument.
    explicit PrimeTable(std::uint32_t limit);

    bool is_prime(std::uint32_t x) const noexcept {
        return x <= limit_ && sieve_[x];
    }

    std::uint32_t limit() const noexcept { return limit_; }

    // Number of primes in [2, x] for x <= limit.
    std::uint64_t prime_count(std::uint32_t x) const;

private:
    std::uint32_t limit_;
    std::vector<bool> sieve_;
};

// Fraction of primes among {2, ..., M}: pi(M) / (M - 1), with M the table
// limit. This is the floor the prime fraction relaxes to in the disordered
// phase, where final pools look like fresh uniform draws. Requires M >= 3.
double residual_ratio_exact(const PrimeTable& table);

// Prime-number-theorem approximation of the same quantity, 1 / ln(M).
double residual_ratio_asymptotic(std::uint32_t pool_limit);

}  // namespace primegen
