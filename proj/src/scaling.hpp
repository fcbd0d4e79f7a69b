#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ensemble.hpp"

namespace primegen {

// Result of an ordinary least-squares fit of ln(y) against ln(x). For the
// derived-exponent helpers below, `exponent` holds the derived quantity and
// its propagated standard error, while intercept and r_squared always
// describe the underlying log-log regression.
struct FitResult {
    double exponent = 0;
    double intercept = 0;
    double stderr_exponent = 0;
    double r_squared = 0;
    std::size_t points_used = 0;
};

// Unweighted OLS in log-log space. Requires at least 3 points, all strictly
// positive in both coordinates.
FitResult fit_power_law(std::span<const double> x, std::span<const double> y);

enum class ThresholdCriterion {
    first_nonzero,  // smallest grid N with P > theta
    half_crossing,  // N where P crosses 0.5, linearly interpolated
};

// Locates the onset of the ordered phase on a P-versus-N curve. The grid must
// be strictly increasing. Throws std::range_error when the criterion cannot
// be satisfied on the given grid.
double detect_threshold(std::span<const std::uint32_t> n_grid,
                        std::span<const double> p_values,
                        ThresholdCriterion criterion, double theta = 0.005);
double detect_threshold(const SweepTable& table, ThresholdCriterion criterion,
                        double theta = 0.005);

// The effective system size M / ln(M). Requires M >= 2.
double characteristic_size(std::uint32_t pool_limit);

// One P-versus-N curve, the unit the collapse operates on.
struct PCurve {
    std::uint32_t pool_limit = 0;
    std::vector<std::uint32_t> n;  // strictly increasing
    std::vector<double> p;
};

PCurve extract_p_curve(const SweepTable& table);

struct CollapseCurve {
    std::uint32_t pool_limit = 0;
    std::vector<double> x;  // (N/L - n_c) * L^(1/nu), L = M/ln(M)
    std::vector<double> y;  // P * L^(beta/nu)
};

struct CollapseTable {
    double n_c = 0;
    double nu = 0;
    double beta = 0;
    std::vector<CollapseCurve> curves;
};

// Pure coordinate rescaling, one output curve per input curve with the same
// point count. No fitting happens here. Requires nu != 0.
CollapseTable collapse(std::span<const PCurve> curves, double n_c, double nu,
                       double beta);
CollapseTable collapse(std::span<const SweepTable> tables, double n_c,
                       double nu, double beta);

// How well the rescaled curves lie on top of each other: mean squared
// vertical distance between each curve and the pointwise median of the other
// curves, evaluated by linear interpolation on a common x grid spanning the
// overlap of all curves. Zero for identical curves; c^2 for two curves offset
// by a constant c. Requires >= 2 curves with >= 2 points each; throws
// std::range_error when the x ranges do not overlap.
double collapse_quality(const CollapseTable& table);

struct TauPeak {
    std::uint32_t n_at_peak = 0;
    double tau_max = 0;
};

// Grid argmax of tau, ties broken toward smaller N. Rows with non-finite tau
// (no completed runs) are skipped.
TauPeak tau_peak(std::span<const std::uint32_t> n_grid,
                 std::span<const double> tau);
TauPeak tau_peak(const SweepTable& table);

// Correlation exponent nu from per-size thresholds, assuming the infinite
// system orders at n_c_infinity (0 by default): fits
// |n_c - n_c_infinity| against L in log-log and returns nu = -1/slope.
// `sizes` holds L = M/ln(M); `n_c` holds the reduced thresholds N_c/L.
// The SweepTable overload does the reduction itself. Requires >= 4 sizes.
FitResult correlation_exponent(std::span<const double> sizes,
                               std::span<const double> n_c,
                               double n_c_infinity = 0.0);
FitResult correlation_exponent(std::span<const SweepTable> tables,
                               ThresholdCriterion criterion,
                               double theta = 0.005,
                               double n_c_infinity = 0.0);

// Order-parameter exponent beta from the decay of P evaluated at each size's
// threshold: fits P(N_c) against L in log-log (slope = -beta/nu) and returns
// beta = -slope * nu. Requires >= 4 sizes and nu != 0.
FitResult order_parameter_exponent(std::span<const double> sizes,
                                   std::span<const double> p_at_threshold,
                                   double nu);
FitResult order_parameter_exponent(std::span<const SweepTable> tables,
                                   double nu, double theta = 0.005);

// Number of distinct perfect matchings of N labeled elements into unordered
// pairs: N! / (2^(N/2) * (N/2)!), which equals (N-1)!!. Computed exactly in
// arbitrary precision from the factorial formula; returned as decimal digits.
// Requires N even, N >= 2.
std::string search_space_size(std::uint32_t n);

}  // namespace primegen
