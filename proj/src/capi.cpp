#include "primegen.h"

#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "annealed.hpp"
#include "ensemble.hpp"
#include "number_theory.hpp"
#include "reactor.hpp"
#include "rng.hpp"
#include "scaling.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* message) {
    g_last_error = message;
    return code;
}

// Runs the body and maps C++ exceptions onto error codes: invalid_argument
// marks precondition violations, range_error marks data the request cannot
// be satisfied on, anything else is internal.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return PG_OK;
    } catch (const std::invalid_argument& e) {
        return fail(PG_ERR_DOMAIN, e.what());
    } catch (const std::range_error& e) {
        return fail(PG_ERR_RANGE, e.what());
    } catch (const std::exception& e) {
        return fail(PG_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PG_ERR_INTERNAL, "unknown failure");
    }
}

primegen::EnsembleParams to_params(const pg_run_params& in) {
    primegen::EnsembleParams params;
    params.pool_limit = in.pool_limit;
    params.system_size = in.system_size;
    params.realizations = in.realizations;
    params.master_seed = in.master_seed;
    params.max_sweeps = in.max_sweeps == 0 ? 1'000'000 : in.max_sweeps;
    params.workers = in.workers;
    return params;
}

void fill_stats(const primegen::EnsembleStats& stats, pg_ensemble_stats* out) {
    out->pool_limit = stats.pool_limit;
    out->system_size = stats.system_size;
    out->realizations = stats.realizations;
    out->completed = stats.completed;
    out->truncated_runs = stats.truncated_runs;
    out->all_prime_runs = stats.all_prime_runs;
    out->r_mean = stats.r_mean;
    out->p = stats.p;
    out->p_stderr = stats.p_stderr;
    out->tau = stats.tau;
    out->tau_raw = stats.tau_raw;
    out->reliable = stats.reliable ? 1 : 0;
}

void fill_fit(const primegen::FitResult& fit, pg_fit_result* out) {
    out->exponent = fit.exponent;
    out->intercept = fit.intercept;
    out->stderr_exponent = fit.stderr_exponent;
    out->r_squared = fit.r_squared;
    out->points_used = fit.points_used;
}

void require_increasing_grid(const uint32_t* n_grid, size_t count) {
    for (size_t k = 1; k < count; ++k) {
        if (n_grid[k] <= n_grid[k - 1]) {
            throw std::invalid_argument("N grid must be strictly increasing");
        }
    }
}

}  // namespace

struct pg_prime_table {
    explicit pg_prime_table(uint32_t limit) : impl(limit) {}
    primegen::PrimeTable impl;
};

struct pg_histogram {
    std::vector<std::pair<uint32_t, uint64_t>> rows;
};

struct pg_collapse {
    primegen::CollapseTable impl;
};

extern "C" {

const char* pg_version(void) { return "0.1.0"; }

const char* pg_last_error(void) { return g_last_error.c_str(); }

int pg_prime_table_create(uint32_t limit, pg_prime_table** out) {
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    *out = nullptr;
    return guarded([&] { *out = new pg_prime_table(limit); });
}

void pg_prime_table_destroy(pg_prime_table* table) { delete table; }

int pg_is_prime(const pg_prime_table* table, uint32_t value, int* out) {
    if (table == nullptr) return fail(PG_ERR_NULL, "table is NULL");
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    *out = table->impl.is_prime(value) ? 1 : 0;
    return PG_OK;
}

int pg_prime_count(const pg_prime_table* table, uint32_t upto, uint64_t* out) {
    if (table == nullptr) return fail(PG_ERR_NULL, "table is NULL");
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] { *out = table->impl.prime_count(upto); });
}

int pg_residual_ratio_exact(const pg_prime_table* table, double* out) {
    if (table == nullptr) return fail(PG_ERR_NULL, "table is NULL");
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] { *out = primegen::residual_ratio_exact(table->impl); });
}

int pg_residual_ratio_asymptotic(uint32_t pool_limit, double* out) {
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded(
        [&] { *out = primegen::residual_ratio_asymptotic(pool_limit); });
}

int pg_collide(uint32_t a, uint32_t b, int* kind, int* replaced_slot,
               uint32_t* new_value) {
    return guarded([&] {
        const primegen::CollisionOutcome outcome = primegen::collide(a, b);
        if (kind != nullptr) {
            switch (outcome.kind) {
                case primegen::CollisionKind::elastic_equal:
                    *kind = PG_COLLISION_ELASTIC_EQUAL;
                    break;
                case primegen::CollisionKind::elastic_nondivisible:
                    *kind = PG_COLLISION_ELASTIC_NONDIVISIBLE;
                    break;
                case primegen::CollisionKind::reaction:
                    *kind = PG_COLLISION_REACTION;
                    break;
            }
        }
        if (replaced_slot != nullptr) *replaced_slot = outcome.replaced_slot;
        if (new_value != nullptr) *new_value = outcome.new_value;
    });
}

int pg_run_single(uint32_t pool_limit, uint32_t system_size, uint64_t seed,
                  uint64_t max_sweeps, pg_run_record* out,
                  uint32_t* final_values) {
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] {
        primegen::PrimeTable table(pool_limit < 2 ? 2 : pool_limit);
        primegen::RandomStream rng(seed);
        primegen::RunOptions options;
        options.max_sweeps = max_sweeps == 0 ? 1'000'000 : max_sweeps;
        const primegen::RunRecord record = primegen::run_to_stationarity(
            pool_limit, system_size, rng, table, options);
        out->sweeps = record.sweeps;
        out->reactions_total = record.reactions_total;
        out->all_primes = record.all_primes ? 1 : 0;
        out->truncated = record.truncated ? 1 : 0;
        if (final_values != nullptr) {
            std::memcpy(final_values, record.final_state.values.data(),
                        record.final_state.values.size() * sizeof(uint32_t));
        }
    });
}

int pg_run_ensemble(const pg_run_params* params, pg_ensemble_stats* out) {
    if (params == nullptr) return fail(PG_ERR_NULL, "params is NULL");
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] {
        const primegen::EnsembleParams resolved = to_params(*params);
        primegen::PrimeTable table(resolved.pool_limit < 2 ? 2
                                                           : resolved.pool_limit);
        fill_stats(primegen::run_ensemble(resolved, table), out);
    });
}

int pg_steady_distribution(const pg_run_params* params, pg_histogram** out,
                           pg_ensemble_stats* stats_out) {
    if (params == nullptr) return fail(PG_ERR_NULL, "params is NULL");
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    *out = nullptr;
    return guarded([&] {
        const primegen::EnsembleParams resolved = to_params(*params);
        primegen::PrimeTable table(resolved.pool_limit < 2 ? 2
                                                           : resolved.pool_limit);
        primegen::EnsembleStats stats = primegen::run_ensemble(resolved, table);
        if (stats_out != nullptr) fill_stats(stats, stats_out);
        auto* hist = new pg_histogram;
        hist->rows = std::move(stats.histogram);
        *out = hist;
    });
}

int pg_histogram_rows(const pg_histogram* hist, size_t* out) {
    if (hist == nullptr) return fail(PG_ERR_NULL, "hist is NULL");
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    *out = hist->rows.size();
    return PG_OK;
}

int pg_histogram_row(const pg_histogram* hist, size_t index, uint32_t* value,
                     uint64_t* count) {
    if (hist == nullptr) return fail(PG_ERR_NULL, "hist is NULL");
    if (index >= hist->rows.size()) {
        return fail(PG_ERR_DOMAIN, "histogram row index out of range");
    }
    if (value != nullptr) *value = hist->rows[index].first;
    if (count != nullptr) *count = hist->rows[index].second;
    return PG_OK;
}

void pg_histogram_destroy(pg_histogram* hist) { delete hist; }

int pg_pair_divisibility(uint32_t pool_limit, double* exact,
                         double* asymptotic) {
    if (exact == nullptr && asymptotic == nullptr) {
        return fail(PG_ERR_NULL, "both out pointers are NULL");
    }
    return guarded([&] {
        if (exact != nullptr) {
            *exact = primegen::pair_divisibility_exact(pool_limit);
        }
        if (asymptotic != nullptr) {
            *asymptotic = primegen::pair_divisibility_asymptotic(pool_limit);
        }
    });
}

int pg_estimate_q(uint32_t pool_limit, uint32_t system_size, uint64_t samples,
                  uint64_t master_seed, uint32_t workers, double* q,
                  double* q_stderr) {
    if (q == nullptr) return fail(PG_ERR_NULL, "q is NULL");
    return guarded([&] {
        const primegen::QEstimate est = primegen::estimate_q(
            pool_limit, system_size, samples, master_seed, workers);
        *q = est.q;
        if (q_stderr != nullptr) *q_stderr = est.q_stderr;
    });
}

int pg_ansatz_q(uint32_t pool_limit, uint32_t system_size, double alpha,
                double* out) {
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded(
        [&] { *out = primegen::ansatz_q(pool_limit, system_size, alpha); });
}

int pg_annealed_threshold(const uint32_t* n_grid, const double* q,
                          size_t count, double* out) {
    if (n_grid == nullptr || q == nullptr) {
        return fail(PG_ERR_NULL, "input array is NULL");
    }
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] {
        require_increasing_grid(n_grid, count);
        primegen::AnnealedCurve curve;
        curve.rows.reserve(count);
        for (size_t k = 0; k < count; ++k) {
            curve.rows.push_back({n_grid[k], q[k], 0.0});
        }
        *out = primegen::annealed_threshold(curve);
    });
}

int pg_fit_power_law(const double* x, const double* y, size_t count,
                     pg_fit_result* out) {
    if (x == nullptr || y == nullptr) {
        return fail(PG_ERR_NULL, "input array is NULL");
    }
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] {
        fill_fit(primegen::fit_power_law({x, count}, {y, count}), out);
    });
}

int pg_detect_threshold(const uint32_t* n_grid, const double* p, size_t count,
                        int criterion, double theta, double* out) {
    if (n_grid == nullptr || p == nullptr) {
        return fail(PG_ERR_NULL, "input array is NULL");
    }
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    if (criterion != PG_THRESHOLD_FIRST_NONZERO &&
        criterion != PG_THRESHOLD_HALF_CROSSING) {
        return fail(PG_ERR_DOMAIN, "unknown threshold criterion");
    }
    return guarded([&] {
        const auto c = criterion == PG_THRESHOLD_FIRST_NONZERO
                           ? primegen::ThresholdCriterion::first_nonzero
                           : primegen::ThresholdCriterion::half_crossing;
        *out = primegen::detect_threshold({n_grid, count}, {p, count}, c, theta);
    });
}

int pg_tau_peak(const uint32_t* n_grid, const double* tau, size_t count,
                uint32_t* n_at_peak, double* tau_max) {
    if (n_grid == nullptr || tau == nullptr) {
        return fail(PG_ERR_NULL, "input array is NULL");
    }
    return guarded([&] {
        const primegen::TauPeak peak =
            primegen::tau_peak({n_grid, count}, {tau, count});
        if (n_at_peak != nullptr) *n_at_peak = peak.n_at_peak;
        if (tau_max != nullptr) *tau_max = peak.tau_max;
    });
}

int pg_characteristic_size(uint32_t pool_limit, double* out) {
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] { *out = primegen::characteristic_size(pool_limit); });
}

int pg_correlation_exponent(const double* sizes, const double* n_c,
                            size_t count, double n_c_infinity,
                            pg_fit_result* out) {
    if (sizes == nullptr || n_c == nullptr) {
        return fail(PG_ERR_NULL, "input array is NULL");
    }
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] {
        fill_fit(primegen::correlation_exponent({sizes, count}, {n_c, count},
                                                n_c_infinity),
                 out);
    });
}

int pg_order_parameter_exponent(const double* sizes,
                                const double* p_at_threshold, size_t count,
                                double nu, pg_fit_result* out) {
    if (sizes == nullptr || p_at_threshold == nullptr) {
        return fail(PG_ERR_NULL, "input array is NULL");
    }
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] {
        fill_fit(primegen::order_parameter_exponent(
                     {sizes, count}, {p_at_threshold, count}, nu),
                 out);
    });
}

int pg_search_space_size(uint32_t n, char* buffer, size_t buffer_len,
                         size_t* needed) {
    if (buffer == nullptr) return fail(PG_ERR_NULL, "buffer is NULL");
    std::string digits;
    const int code = guarded([&] { digits = primegen::search_space_size(n); });
    if (code != PG_OK) return code;
    const size_t required = digits.size() + 1;
    if (needed != nullptr) *needed = required;
    if (buffer_len < required) {
        return fail(PG_ERR_BUFFER, "buffer too small for decimal digits");
    }
    std::memcpy(buffer, digits.c_str(), required);
    return PG_OK;
}

int pg_collapse_create(double n_c, double nu, double beta, pg_collapse** out) {
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    *out = nullptr;
    return guarded([&] {
        if (nu == 0) {
            throw std::invalid_argument("collapse: nu must be nonzero");
        }
        auto* collapse = new pg_collapse;
        collapse->impl.n_c = n_c;
        collapse->impl.nu = nu;
        collapse->impl.beta = beta;
        *out = collapse;
    });
}

int pg_collapse_add_curve(pg_collapse* collapse, uint32_t pool_limit,
                          const uint32_t* n_grid, const double* p,
                          size_t count) {
    if (collapse == nullptr) return fail(PG_ERR_NULL, "collapse is NULL");
    if (n_grid == nullptr || p == nullptr) {
        return fail(PG_ERR_NULL, "input array is NULL");
    }
    return guarded([&] {
        primegen::PCurve curve;
        curve.pool_limit = pool_limit;
        curve.n.assign(n_grid, n_grid + count);
        curve.p.assign(p, p + count);
        const primegen::CollapseTable rescaled = primegen::collapse(
            std::span<const primegen::PCurve>(&curve, 1), collapse->impl.n_c,
            collapse->impl.nu, collapse->impl.beta);
        collapse->impl.curves.push_back(rescaled.curves.front());
    });
}

int pg_collapse_curves(const pg_collapse* collapse, size_t* out) {
    if (collapse == nullptr) return fail(PG_ERR_NULL, "collapse is NULL");
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    *out = collapse->impl.curves.size();
    return PG_OK;
}

int pg_collapse_curve(const pg_collapse* collapse, size_t curve,
                      uint32_t* pool_limit, size_t* points) {
    if (collapse == nullptr) return fail(PG_ERR_NULL, "collapse is NULL");
    if (curve >= collapse->impl.curves.size()) {
        return fail(PG_ERR_DOMAIN, "curve index out of range");
    }
    if (pool_limit != nullptr) {
        *pool_limit = collapse->impl.curves[curve].pool_limit;
    }
    if (points != nullptr) *points = collapse->impl.curves[curve].x.size();
    return PG_OK;
}

int pg_collapse_point(const pg_collapse* collapse, size_t curve, size_t index,
                      double* x, double* y) {
    if (collapse == nullptr) return fail(PG_ERR_NULL, "collapse is NULL");
    if (curve >= collapse->impl.curves.size()) {
        return fail(PG_ERR_DOMAIN, "curve index out of range");
    }
    const primegen::CollapseCurve& c = collapse->impl.curves[curve];
    if (index >= c.x.size()) {
        return fail(PG_ERR_DOMAIN, "point index out of range");
    }
    if (x != nullptr) *x = c.x[index];
    if (y != nullptr) *y = c.y[index];
    return PG_OK;
}

int pg_collapse_quality(const pg_collapse* collapse, double* out) {
    if (collapse == nullptr) return fail(PG_ERR_NULL, "collapse is NULL");
    if (out == nullptr) return fail(PG_ERR_NULL, "out is NULL");
    return guarded([&] { *out = primegen::collapse_quality(collapse->impl); });
}

void pg_collapse_destroy(pg_collapse* collapse) { delete collapse; }

}  // extern "C"
