#include "scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace primegen {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (const double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) +
                                        " contains a non-finite value");
        }
    }
}

void require_increasing(std::span<const std::uint32_t> grid) {
    if (grid.empty()) {
        throw std::invalid_argument("empty N grid");
    }
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (grid[k] <= grid[k - 1]) {
            throw std::invalid_argument("N grid must be strictly increasing");
        }
    }
}

// Linear interpolation on a curve whose points are sorted by x. Queries are
// only ever issued inside [x.front(), x.back()].
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
                   double at) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), at);
    std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    if (hi == 0) return ys.front();
    if (hi >= xs.size()) return ys.back();
    const std::size_t lo = hi - 1;
    const double dx = xs[hi] - xs[lo];
    if (dx <= 0) return ys[lo];
    const double w = (at - xs[lo]) / dx;
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

double median_of(std::vector<double>& scratch) {
    std::sort(scratch.begin(), scratch.end());
    const std::size_t k = scratch.size();
    if (k % 2 == 1) return scratch[k / 2];
    return 0.5 * (scratch[k / 2 - 1] + scratch[k / 2]);
}

boost::multiprecision::cpp_int factorial(std::uint32_t n) {
    boost::multiprecision::cpp_int out = 1;
    for (std::uint32_t k = 2; k <= n; ++k) {
        out *= k;
    }
    return out;
}

}  // namespace

FitResult fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("fit_power_law: size mismatch");
    }
    if (x.size() < 3) {
        throw std::invalid_argument("fit_power_law: need at least 3 points");
    }
    const std::size_t count = x.size();
    std::vector<double> lx(count), ly(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (!(x[k] > 0) || !(y[k] > 0)) {
            throw std::invalid_argument(
                "fit_power_law: coordinates must be strictly positive");
        }
        lx[k] = std::log(x[k]);
        ly[k] = std::log(y[k]);
    }

    double mean_x = 0, mean_y = 0;
    for (std::size_t k = 0; k < count; ++k) {
        mean_x += lx[k];
        mean_y += ly[k];
    }
    mean_x /= static_cast<double>(count);
    mean_y /= static_cast<double>(count);

    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double dx = lx[k] - mean_x;
        const double dy = ly[k] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) {
        throw std::invalid_argument("fit_power_law: x values all coincide");
    }

    FitResult fit;
    fit.points_used = count;
    fit.exponent = sxy / sxx;
    fit.intercept = mean_y - fit.exponent * mean_x;

    double ssr = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double res = ly[k] - (fit.intercept + fit.exponent * lx[k]);
        ssr += res * res;
    }
    fit.stderr_exponent =
        std::sqrt(ssr / (static_cast<double>(count) - 2.0) / sxx);
    fit.r_squared = syy > 0 ? 1.0 - ssr / syy : (ssr == 0 ? 1.0 : 0.0);
    return fit;
}

double detect_threshold(std::span<const std::uint32_t> n_grid,
                        std::span<const double> p_values,
                        ThresholdCriterion criterion, double theta) {
    require_increasing(n_grid);
    if (n_grid.size() != p_values.size()) {
        throw std::invalid_argument("detect_threshold: size mismatch");
    }
    require_finite(p_values, "detect_threshold: P column");

    if (criterion == ThresholdCriterion::first_nonzero) {
        if (!(theta > 0) || !(theta < 1)) {
            throw std::invalid_argument(
                "detect_threshold: theta must lie in (0, 1)");
        }
        for (std::size_t k = 0; k < p_values.size(); ++k) {
            if (p_values[k] > theta) {
                return static_cast<double>(n_grid[k]);
            }
        }
        throw std::range_error(
            "detect_threshold: P never exceeds theta; extend the grid toward "
            "larger N");
    }

    // half_crossing
    if (p_values.size() < 2) {
        throw std::invalid_argument(
            "detect_threshold: half_crossing needs at least two points");
    }
    if (p_values.front() >= 0.5) {
        throw std::range_error(
            "detect_threshold: P already at or above 0.5 at the smallest N; "
            "extend the grid toward smaller N");
    }
    for (std::size_t k = 0; k + 1 < p_values.size(); ++k) {
        if (p_values[k + 1] < 0.5) continue;
        const double dn = static_cast<double>(n_grid[k + 1]) -
                          static_cast<double>(n_grid[k]);
        const double dp = p_values[k + 1] - p_values[k];
        return static_cast<double>(n_grid[k]) +
               dn * (0.5 - p_values[k]) / dp;
    }
    throw std::range_error(
        "detect_threshold: P never reaches 0.5; extend the grid toward "
        "larger N");
}

double detect_threshold(const SweepTable& table, ThresholdCriterion criterion,
                        double theta) {
    const PCurve curve = extract_p_curve(table);
    return detect_threshold(curve.n, curve.p, criterion, theta);
}

double characteristic_size(std::uint32_t pool_limit) {
    if (pool_limit < 2) {
        throw std::invalid_argument(
            "characteristic_size: pool limit must be at least 2");
    }
    const double m = pool_limit;
    return m / std::log(m);
}

PCurve extract_p_curve(const SweepTable& table) {
    PCurve curve;
    curve.pool_limit = table.pool_limit;
    curve.n.reserve(table.rows.size());
    curve.p.reserve(table.rows.size());
    for (const EnsembleStats& row : table.rows) {
        curve.n.push_back(row.system_size);
        curve.p.push_back(row.p);
    }
    return curve;
}

CollapseTable collapse(std::span<const PCurve> curves, double n_c, double nu,
                       double beta) {
    if (!std::isfinite(n_c) || !std::isfinite(nu) || !std::isfinite(beta)) {
        throw std::invalid_argument("collapse: parameters must be finite");
    }
    if (nu == 0) {
        throw std::invalid_argument("collapse: nu must be nonzero");
    }
    if (curves.empty()) {
        throw std::invalid_argument("collapse: no input curves");
    }

    CollapseTable out;
    out.n_c = n_c;
    out.nu = nu;
    out.beta = beta;
    out.curves.reserve(curves.size());
    for (const PCurve& curve : curves) {
        if (curve.n.size() != curve.p.size() || curve.n.empty()) {
            throw std::invalid_argument("collapse: malformed input curve");
        }
        const double size = characteristic_size(curve.pool_limit);
        const double x_scale = std::pow(size, 1.0 / nu);
        const double y_scale = std::pow(size, beta / nu);
        CollapseCurve rescaled;
        rescaled.pool_limit = curve.pool_limit;
        rescaled.x.reserve(curve.n.size());
        rescaled.y.reserve(curve.n.size());
        for (std::size_t k = 0; k < curve.n.size(); ++k) {
            const double n = static_cast<double>(curve.n[k]) / size;
            rescaled.x.push_back((n - n_c) * x_scale);
            rescaled.y.push_back(curve.p[k] * y_scale);
        }
        out.curves.push_back(std::move(rescaled));
    }
    return out;
}

CollapseTable collapse(std::span<const SweepTable> tables, double n_c,
                       double nu, double beta) {
    std::vector<PCurve> curves;
    curves.reserve(tables.size());
    for (const SweepTable& table : tables) {
        curves.push_back(extract_p_curve(table));
    }
    return collapse(curves, n_c, nu, beta);
}

double collapse_quality(const CollapseTable& table) {
    const std::size_t curve_count = table.curves.size();
    if (curve_count < 2) {
        throw std::invalid_argument("collapse_quality: need at least 2 curves");
    }

    // Sort each curve by x once; the transform preserves point order for
    // nu > 0 but callers may feed arbitrary curves.
    std::vector<std::vector<double>> xs(curve_count), ys(curve_count);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < curve_count; ++c) {
        const CollapseCurve& curve = table.curves[c];
        if (curve.x.size() != curve.y.size() || curve.x.size() < 2) {
            throw std::invalid_argument(
                "collapse_quality: every curve needs at least 2 points");
        }
        require_finite(curve.x, "collapse_quality: x");
        require_finite(curve.y, "collapse_quality: y");
        std::vector<std::size_t> order(curve.x.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return curve.x[a] < curve.x[b];
        });
        xs[c].reserve(order.size());
        ys[c].reserve(order.size());
        for (const std::size_t k : order) {
            xs[c].push_back(curve.x[k]);
            ys[c].push_back(curve.y[k]);
        }
        lo = std::max(lo, xs[c].front());
        hi = std::min(hi, xs[c].back());
    }
    if (!(lo <= hi)) {
        throw std::range_error(
            "collapse_quality: rescaled curves have no overlapping x range");
    }

    constexpr std::size_t kGridPoints = 101;
    const double step = (hi - lo) / static_cast<double>(kGridPoints - 1);
    std::vector<double> at_grid(curve_count);
    std::vector<double> others;
    others.reserve(curve_count - 1);

    double sum_sq = 0;
    for (std::size_t g = 0; g < kGridPoints; ++g) {
        const double x = lo + step * static_cast<double>(g);
        for (std::size_t c = 0; c < curve_count; ++c) {
            at_grid[c] = interpolate(xs[c], ys[c], x);
        }
        for (std::size_t c = 0; c < curve_count; ++c) {
            others.clear();
            for (std::size_t o = 0; o < curve_count; ++o) {
                if (o != c) others.push_back(at_grid[o]);
            }
            const double med = median_of(others);
            const double diff = at_grid[c] - med;
            sum_sq += diff * diff;
        }
    }
    return sum_sq /
           (static_cast<double>(curve_count) * static_cast<double>(kGridPoints));
}

TauPeak tau_peak(std::span<const std::uint32_t> n_grid,
                 std::span<const double> tau) {
    if (n_grid.empty() || n_grid.size() != tau.size()) {
        throw std::invalid_argument("tau_peak: empty table or size mismatch");
    }
    bool found = false;
    TauPeak best;
    for (std::size_t k = 0; k < tau.size(); ++k) {
        if (!std::isfinite(tau[k])) continue;
        if (!found || tau[k] > best.tau_max ||
            (tau[k] == best.tau_max && n_grid[k] < best.n_at_peak)) {
            best.n_at_peak = n_grid[k];
            best.tau_max = tau[k];
            found = true;
        }
    }
    if (!found) {
        throw std::range_error("tau_peak: no finite tau values");
    }
    return best;
}

TauPeak tau_peak(const SweepTable& table) {
    std::vector<std::uint32_t> n;
    std::vector<double> tau;
    n.reserve(table.rows.size());
    tau.reserve(table.rows.size());
    for (const EnsembleStats& row : table.rows) {
        n.push_back(row.system_size);
        tau.push_back(row.tau);
    }
    return tau_peak(n, tau);
}

FitResult correlation_exponent(std::span<const double> sizes,
                               std::span<const double> n_c,
                               double n_c_infinity) {
    if (sizes.size() != n_c.size()) {
        throw std::invalid_argument("correlation_exponent: size mismatch");
    }
    if (sizes.size() < 4) {
        throw std::invalid_argument(
            "correlation_exponent: need at least 4 pool sizes");
    }
    std::vector<double> distance(n_c.size());
    for (std::size_t k = 0; k < n_c.size(); ++k) {
        distance[k] = std::abs(n_c[k] - n_c_infinity);
    }
    const FitResult raw = fit_power_law(sizes, distance);
    if (raw.exponent == 0) {
        throw std::range_error(
            "correlation_exponent: threshold distance is flat in size");
    }
    FitResult fit = raw;
    fit.exponent = -1.0 / raw.exponent;
    fit.stderr_exponent = raw.stderr_exponent / (raw.exponent * raw.exponent);
    return fit;
}

FitResult correlation_exponent(std::span<const SweepTable> tables,
                               ThresholdCriterion criterion, double theta,
                               double n_c_infinity) {
    if (tables.size() < 4) {
        throw std::invalid_argument(
            "correlation_exponent: need at least 4 pool sizes");
    }
    std::vector<double> sizes, reduced;
    sizes.reserve(tables.size());
    reduced.reserve(tables.size());
    for (const SweepTable& table : tables) {
        const double size = characteristic_size(table.pool_limit);
        sizes.push_back(size);
        reduced.push_back(detect_threshold(table, criterion, theta) / size);
    }
    return correlation_exponent(sizes, reduced, n_c_infinity);
}

FitResult order_parameter_exponent(std::span<const double> sizes,
                                   std::span<const double> p_at_threshold,
                                   double nu) {
    if (sizes.size() != p_at_threshold.size()) {
        throw std::invalid_argument("order_parameter_exponent: size mismatch");
    }
    if (sizes.size() < 4) {
        throw std::invalid_argument(
            "order_parameter_exponent: need at least 4 pool sizes");
    }
    if (nu == 0 || !std::isfinite(nu)) {
        throw std::invalid_argument(
            "order_parameter_exponent: nu must be finite and nonzero");
    }
    const FitResult raw = fit_power_law(sizes, p_at_threshold);
    FitResult fit = raw;
    fit.exponent = -raw.exponent * nu;
    fit.stderr_exponent = std::abs(nu) * raw.stderr_exponent;
    return fit;
}

FitResult order_parameter_exponent(std::span<const SweepTable> tables,
                                   double nu, double theta) {
    if (tables.size() < 4) {
        throw std::invalid_argument(
            "order_parameter_exponent: need at least 4 pool sizes");
    }
    std::vector<double> sizes, p_at;
    sizes.reserve(tables.size());
    p_at.reserve(tables.size());
    for (const SweepTable& table : tables) {
        const double n_c = detect_threshold(
            table, ThresholdCriterion::first_nonzero, theta);
        const auto at = static_cast<std::uint32_t>(std::llround(n_c));
        double p = std::numeric_limits<double>::quiet_NaN();
        for (const EnsembleStats& row : table.rows) {
            if (row.system_size == at) {
                p = row.p;
                break;
            }
        }
        sizes.push_back(characteristic_size(table.pool_limit));
        p_at.push_back(p);
    }
    return order_parameter_exponent(sizes, p_at, nu);
}

std::string search_space_size(std::uint32_t n) {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument(
            "search_space_size: N must be even and at least 2");
    }
    using boost::multiprecision::cpp_int;
    const std::uint32_t half = n / 2;
    const cpp_int numerator = factorial(n);
    const cpp_int denominator =
        boost::multiprecision::pow(cpp_int(2), half) * factorial(half);
    const cpp_int result = numerator / denominator;
    return result.str();
}

}  // namespace primegen
