#ifndef PRIMEGEN_H
#define PRIMEGEN_H

/*
 * C interface to the integer-collision prime generator: seeded Monte Carlo
 * ensembles of the divide-on-collision dynamics over pools {2..M}, the
 * annealed (fresh-draws) approximation, and the scaling analysis helpers
 * (threshold detection, power-law fits, data collapse).
 *
 * Every fallible function returns an error code and reports results through
 * out parameters. On failure, pg_last_error() describes the problem for the
 * calling thread. All randomness is derived deterministically from the seeds
 * passed in; worker counts change wall time, never results.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PG_API __declspec(dllexport)
#else
#define PG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes. */
#define PG_OK 0
#define PG_ERR_DOMAIN 1   /* precondition violated (bad argument) */
#define PG_ERR_RANGE 2    /* unsatisfiable on the given data */
#define PG_ERR_NULL 3     /* required pointer was NULL */
#define PG_ERR_BUFFER 4   /* output buffer too small */
#define PG_ERR_INTERNAL 5 /* unexpected failure */

PG_API const char* pg_version(void);

/* Message for the most recent failure on the calling thread. Never NULL. */
PG_API const char* pg_last_error(void);

/* ---------- primality ---------- */

typedef struct pg_prime_table pg_prime_table;

/* Sieve over [0, limit]; limit >= 2. */
PG_API int pg_prime_table_create(uint32_t limit, pg_prime_table** out);
PG_API void pg_prime_table_destroy(pg_prime_table* table);

PG_API int pg_is_prime(const pg_prime_table* table, uint32_t value, int* out);

/* Count of primes in [2, upto]; requires 2 <= upto <= limit. */
PG_API int pg_prime_count(const pg_prime_table* table, uint32_t upto,
                          uint64_t* out);

/* pi(M) / (M - 1) for the table's limit M; requires M >= 3. */
PG_API int pg_residual_ratio_exact(const pg_prime_table* table, double* out);

/* 1 / ln(M); requires M >= 3. */
PG_API int pg_residual_ratio_asymptotic(uint32_t pool_limit, double* out);

/* ---------- collisions and single runs ---------- */

#define PG_COLLISION_ELASTIC_EQUAL 0
#define PG_COLLISION_ELASTIC_NONDIVISIBLE 1
#define PG_COLLISION_REACTION 2

/*
 * Outcome of one pair collision between values a, b >= 2. Equality wins over
 * divisibility, so (k, k) is always elastic. On reaction, replaced_slot says
 * which argument was replaced (0 = a, 1 = b) and new_value holds
 * larger/smaller; otherwise replaced_slot = -1 and new_value = 0. Any out
 * pointer may be NULL.
 */
PG_API int pg_collide(uint32_t a, uint32_t b, int* kind, int* replaced_slot,
                      uint32_t* new_value);

typedef struct pg_run_record {
    uint64_t sweeps;          /* time steps performed, always >= 1 */
    uint64_t reactions_total;
    int all_primes;
    int truncated;            /* hit max_sweeps before freezing */
} pg_run_record;

/*
 * One realization: draw system_size values from {2..pool_limit} using the
 * stream seeded by `seed`, sweep until frozen or max_sweeps (0 = 10^6).
 * final_values may be NULL; when given it must hold system_size entries.
 */
PG_API int pg_run_single(uint32_t pool_limit, uint32_t system_size,
                         uint64_t seed, uint64_t max_sweeps,
                         pg_run_record* out, uint32_t* final_values);

/* ---------- ensembles ---------- */

typedef struct pg_run_params {
    uint32_t pool_limit;   /* M, >= 3 */
    uint32_t system_size;  /* N, >= 2 */
    uint64_t realizations; /* R, >= 1 */
    uint64_t master_seed;
    uint64_t max_sweeps;   /* 0 = default 10^6 */
    uint32_t workers;      /* 0 = one per hardware thread */
} pg_run_params;

typedef struct pg_ensemble_stats {
    uint32_t pool_limit;
    uint32_t system_size;
    uint64_t realizations;
    uint64_t completed;       /* realizations that froze in time */
    uint64_t truncated_runs;  /* excluded from all statistics below */
    uint64_t all_prime_runs;
    double r_mean;            /* mean final prime ratio */
    double p;                 /* fraction of completed runs ending all-prime */
    double p_stderr;          /* binomial standard error of p */
    double tau;               /* mean sweeps / N */
    double tau_raw;           /* mean sweeps */
    int reliable;             /* 0 when truncated_runs exceed 0.1% of R */
} pg_ensemble_stats;

/*
 * R independent realizations at fixed (M, N). Realization i draws its stream
 * from a stable hash of (master_seed, M, N, i), so results are identical for
 * any worker count and any execution order.
 */
PG_API int pg_run_ensemble(const pg_run_params* params,
                           pg_ensemble_stats* out);

typedef struct pg_histogram pg_histogram;

/*
 * Counts of final-state values over the completed runs of an ensemble,
 * sparse and sorted by value. stats_out may be NULL.
 */
PG_API int pg_steady_distribution(const pg_run_params* params,
                                  pg_histogram** out,
                                  pg_ensemble_stats* stats_out);
PG_API int pg_histogram_rows(const pg_histogram* hist, size_t* out);
PG_API int pg_histogram_row(const pg_histogram* hist, size_t index,
                            uint32_t* value, uint64_t* count);
PG_API void pg_histogram_destroy(pg_histogram* hist);

/* ---------- annealed approximation ---------- */

/*
 * Probability that two independent uniform draws from {2..M} form a reactive
 * pair: exact finite sum, plus the 2 ln(M)/M approximation. Either out
 * pointer may be NULL. Requires M >= 4.
 */
PG_API int pg_pair_divisibility(uint32_t pool_limit, double* exact,
                                double* asymptotic);

/*
 * Monte Carlo estimate of q(N, M): the probability that N fresh i.i.d.
 * draws from {2..M} contain no reactive pair. Sample s draws its stream
 * from a hash of (master_seed, M, N, s). Requires M >= 3, N >= 1, S >= 1.
 */
PG_API int pg_estimate_q(uint32_t pool_limit, uint32_t system_size,
                         uint64_t samples, uint64_t master_seed,
                         uint32_t workers, double* q, double* q_stderr);

/* (1 - 2 ln(M)/M) ^ (N^(1/alpha)); M >= 4, N >= 1, alpha > 0. */
PG_API int pg_ansatz_q(uint32_t pool_limit, uint32_t system_size,
                       double alpha, double* out);

/*
 * N where a q-versus-N curve crosses 0.5, linearly interpolated between the
 * bracketing grid points. The grid must be strictly increasing. Returns
 * PG_ERR_RANGE when 0.5 is never bracketed or the bracketing gap is too
 * coarse (more than one unit of N and more than 5% of the threshold).
 */
PG_API int pg_annealed_threshold(const uint32_t* n_grid, const double* q,
                                 size_t count, double* out);

/* ---------- scaling analysis ---------- */

typedef struct pg_fit_result {
    double exponent;        /* slope in log-log space, or derived exponent */
    double intercept;       /* intercept of the underlying log-log fit */
    double stderr_exponent;
    double r_squared;
    uint64_t points_used;
} pg_fit_result;

/* Unweighted least squares of ln(y) on ln(x); >= 3 positive points. */
PG_API int pg_fit_power_law(const double* x, const double* y, size_t count,
                            pg_fit_result* out);

#define PG_THRESHOLD_FIRST_NONZERO 0
#define PG_THRESHOLD_HALF_CROSSING 1

/*
 * Onset of the ordered phase on a P-versus-N curve (strictly increasing
 * grid). FIRST_NONZERO: smallest grid N with P > theta. HALF_CROSSING:
 * interpolated N where P reaches 0.5 (theta ignored). PG_ERR_RANGE when the
 * criterion cannot be met on the grid.
 */
PG_API int pg_detect_threshold(const uint32_t* n_grid, const double* p,
                               size_t count, int criterion, double theta,
                               double* out);

/* Grid argmax of tau; ties break toward smaller N; non-finite rows skipped. */
PG_API int pg_tau_peak(const uint32_t* n_grid, const double* tau, size_t count,
                       uint32_t* n_at_peak, double* tau_max);

/* M / ln(M); requires M >= 2. */
PG_API int pg_characteristic_size(uint32_t pool_limit, double* out);

/*
 * Correlation exponent nu from per-size reduced thresholds n_c = N_c/L,
 * where L = M/ln(M) is in `sizes`: fits |n_c - n_c_infinity| against L in
 * log-log and returns nu = -1/slope in out->exponent. Requires >= 4 sizes.
 */
PG_API int pg_correlation_exponent(const double* sizes, const double* n_c,
                                   size_t count, double n_c_infinity,
                                   pg_fit_result* out);

/*
 * Order-parameter exponent beta from P evaluated at each size's threshold:
 * fits P(N_c) against L in log-log (slope = -beta/nu) and returns
 * beta = -slope * nu in out->exponent. Requires >= 4 sizes, nu != 0.
 */
PG_API int pg_order_parameter_exponent(const double* sizes,
                                       const double* p_at_threshold,
                                       size_t count, double nu,
                                       pg_fit_result* out);

/*
 * Decimal digits of (N-1)!! = N!/(2^(N/2) (N/2)!) for even N >= 2, exact at
 * arbitrary precision. Writes a NUL-terminated string; on PG_ERR_BUFFER,
 * *needed (when non-NULL) holds the required size including the terminator.
 */
PG_API int pg_search_space_size(uint32_t n, char* buffer, size_t buffer_len,
                                size_t* needed);

/* ---------- data collapse ---------- */

typedef struct pg_collapse pg_collapse;

/*
 * Collects P-versus-N curves for several pool sizes and rescales each point
 * to x = (N/L - n_c) * L^(1/nu), y = P * L^(beta/nu) with L = M/ln(M).
 * Requires nu != 0.
 */
PG_API int pg_collapse_create(double n_c, double nu, double beta,
                              pg_collapse** out);
PG_API int pg_collapse_add_curve(pg_collapse* collapse, uint32_t pool_limit,
                                 const uint32_t* n_grid, const double* p,
                                 size_t count);
PG_API int pg_collapse_curves(const pg_collapse* collapse, size_t* out);
PG_API int pg_collapse_curve(const pg_collapse* collapse, size_t curve,
                             uint32_t* pool_limit, size_t* points);
PG_API int pg_collapse_point(const pg_collapse* collapse, size_t curve,
                             size_t index, double* x, double* y);

/*
 * Mean squared vertical distance between each rescaled curve and the
 * pointwise median of the others, on a common x grid over the shared
 * overlap. Zero for identical curves. Requires >= 2 curves of >= 2 points;
 * PG_ERR_RANGE when the x ranges do not overlap.
 */
PG_API int pg_collapse_quality(const pg_collapse* collapse, double* out);
PG_API void pg_collapse_destroy(pg_collapse* collapse);

#ifdef __cplusplus
}
#endif

#endif /* PRIMEGEN_H */
