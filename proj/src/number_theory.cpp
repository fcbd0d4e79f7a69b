#include "number_theory.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace primegen {

PrimeTable::PrimeTable(std::uint32_t limit) : limit_(limit) {
    if (limit < 2) {
        throw std::invalid_argument("PrimeTable: limit must be at least 2");
    }
    sieve_.assign(static_cast<std::size_t>(limit) + 1, true);
    sieve_[0] = sieve_[1] = false;
    for (std::uint64_t p = 2; p * p <= limit; ++p) {
        if (!sieve_[p]) continue;
        for (std::uint64_t q = p * p; q <= limit; q += p) {
            sieve_[q] = false;
        }
    }
}

std::uint64_t PrimeTable::prime_count(std::uint32_t x) const {
    if (x < 2 || x > limit_) {
        throw std::invalid_argument("prime_count: argument outside [2, limit]");
    }
    std::uint64_t count = 0;
    for (std::uint32_t v = 2; v <= x; ++v) {
        count += sieve_[v] ? 1 : 0;
    }
    return count;
}

double residual_ratio_exact(const PrimeTable& table) {
    const std::uint32_t m = table.limit();
    if (m < 3) {
        throw std::invalid_argument("residual_ratio_exact: pool limit must be at least 3");
    }
    return static_cast<double>(table.prime_count(m)) /
           static_cast<double>(m - 1);
}

double residual_ratio_asymptotic(std::uint32_t pool_limit) {
    if (pool_limit < 3) {
        throw std::invalid_argument(
            "residual_ratio_asymptotic: pool limit must be at least 3");
    }
    return 1.0 / std::log(static_cast<double>(pool_limit));
}

}  // namespace primegen
