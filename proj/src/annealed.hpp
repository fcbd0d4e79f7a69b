#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace primegen {

// Exact probability that two values drawn independently and uniformly from
// {2..M} form a reactive pair (distinct, smaller divides larger):
//   p(M) = 2 / (M-1)^2 * sum_{x=2}^{floor(M/2)} floor((M-x)/x)
// Requires M >= 4 (the sum is empty below that).
double pair_divisibility_exact(std::uint32_t pool_limit);

// Large-M approximation of the same quantity, 2 ln(M) / M.
double pair_divisibility_asymptotic(std::uint32_t pool_limit);

struct QEstimate {
    double q = 0;       // fraction of sampled pools with no reactive pair
    double q_stderr = 0;
};

// Monte Carlo estimate of q(N, M): the probability that a pool of N fresh
// i.i.d. draws from {2..M} contains no reactive pair. This treats every time
// step as a fresh pool, i.e. correlations between steps are discarded.
// Sample s draws its stream from a hash of (master_seed, M, N, s).
// Requires M >= 3, N >= 1, samples >= 1.
QEstimate estimate_q(std::uint32_t pool_limit, std::uint32_t system_size,
                     std::uint64_t samples, std::uint64_t master_seed,
                     unsigned workers = 1);

// Closed-form model of q: (1 - 2 ln(M)/M) ^ (N^(1/alpha)). The exponent
// N^(1/alpha) plays the role of the number of effectively independent pairs.
// Requires M >= 4, N >= 1, alpha > 0, and 2 ln(M)/M < 1.
double ansatz_q(std::uint32_t pool_limit, std::uint32_t system_size,
                double alpha);

struct AnnealedPoint {
    std::uint32_t system_size = 0;
    double q = 0;
    double q_stderr = 0;
};

struct AnnealedCurve {
    std::uint32_t pool_limit = 0;
    std::uint64_t samples = 0;
    std::vector<AnnealedPoint> rows;  // system_size strictly increasing
};

AnnealedCurve annealed_curve(std::uint32_t pool_limit,
                             std::span<const std::uint32_t> n_grid,
                             std::uint64_t samples, std::uint64_t master_seed,
                             unsigned workers = 1);

// The N where q crosses 0.5, by linear interpolation between the bracketing
// grid points. Throws std::range_error when the curve never brackets 0.5,
// saying which direction to widen the N grid.
double annealed_threshold(const AnnealedCurve& curve);

}  // namespace primegen
