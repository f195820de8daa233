/*
 * primelab C interface.
 *
 * Every fallible call returns a pl_status; on failure pl_last_error() holds a
 * message for the calling thread until its next failing call. Objects are
 * opaque handles released with their matching *_free function. Strings
 * returned through char** are released with pl_free_string.
 */
#ifndef PRIMELAB_H
#define PRIMELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(PRIMELAB_BUILDING)
#define PL_API __attribute__((visibility("default")))
#else
#define PL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pl_status {
  PL_OK = 0,
  PL_ERR_ARGUMENT = 1,
  PL_ERR_DEGENERATE = 2, /* well-formed input with nothing to compute */
  PL_ERR_RESOURCE = 3,   /* memory budget or numeric range exceeded */
  PL_ERR_INTERNAL = 4
} pl_status;

PL_API const char* pl_version(void);
PL_API const char* pl_last_error(void);
PL_API const char* pl_status_name(pl_status status);
PL_API void pl_free_string(char* s);

PL_API void pl_set_memory_budget(uint64_t bytes);
PL_API uint64_t pl_memory_budget(void);
/* 0 = use all hardware threads. Results do not depend on this. */
PL_API void pl_set_threads(unsigned n);
PL_API pl_status pl_set_segment_size(uint64_t entries);

/* ---- prime engine ------------------------------------------------------ */

typedef struct pl_u64_array pl_u64_array;
PL_API size_t pl_u64_array_size(const pl_u64_array* a);
PL_API const uint64_t* pl_u64_array_data(const pl_u64_array* a);
PL_API void pl_u64_array_free(pl_u64_array* a);

PL_API pl_status pl_primes_up_to(uint64_t x, pl_u64_array** out);

typedef struct pl_sieve pl_sieve;
/* Primality over [lo, hi), 2 <= lo < hi. */
PL_API pl_status pl_sieve_segment(uint64_t lo, uint64_t hi, pl_sieve** out);
/* [0, hi) with smallest-prime-factor and Moebius tables. */
PL_API pl_status pl_dense_tables(uint64_t hi, pl_sieve** out);
PL_API uint64_t pl_sieve_lo(const pl_sieve* s);
PL_API uint64_t pl_sieve_hi(const pl_sieve* s);
PL_API uint64_t pl_sieve_count(const pl_sieve* s);
PL_API pl_status pl_sieve_is_prime(const pl_sieve* s, uint64_t m, int* out);
PL_API pl_status pl_sieve_primes(const pl_sieve* s, pl_u64_array** out);
PL_API pl_status pl_sieve_spf(const pl_sieve* s, uint64_t m, uint64_t* out);
PL_API pl_status pl_sieve_mobius(const pl_sieve* s, uint64_t m, int* out);
PL_API void pl_sieve_free(pl_sieve* s);

PL_API int pl_is_prime(uint64_t n);
/* *out = least prime <= bound dividing m, or 0 when P-(m) > bound. */
PL_API pl_status pl_smallest_prime_factor_bounded(uint64_t m, uint64_t bound, uint64_t* out);

typedef struct pl_prime_power {
  uint64_t prime;
  uint32_t exponent;
} pl_prime_power;
#define PL_MAX_FACTORS 16
PL_API pl_status pl_factorize(uint64_t n, pl_prime_power* out, size_t capacity, size_t* count);
PL_API pl_status pl_euler_phi(uint64_t q, uint64_t* out);

/* ---- tuples ------------------------------------------------------------ */

typedef struct pl_tuple pl_tuple;
/* "0,2,6". Unsorted input is an error unless normalize != 0. */
PL_API pl_status pl_tuple_parse(const char* text, int normalize, pl_tuple** out);
PL_API pl_status pl_tuple_from_offsets(const uint64_t* offsets, size_t k, pl_tuple** out);
PL_API size_t pl_tuple_size(const pl_tuple* t);
PL_API uint64_t pl_tuple_base(const pl_tuple* t);
PL_API uint64_t pl_tuple_diameter(const pl_tuple* t);
/* Absolute offset i (0-based). */
PL_API uint64_t pl_tuple_offset(const pl_tuple* t, size_t i);
PL_API pl_status pl_tuple_to_string(const pl_tuple* t, char** out);
PL_API void pl_tuple_free(pl_tuple* t);

PL_API pl_status pl_residues_covered(const pl_tuple* t, uint64_t p, uint64_t* out);
/* *witness = least obstructing prime, or 0 when admissible. */
PL_API pl_status pl_is_admissible(const pl_tuple* t, int* admissible, uint64_t* witness);

typedef enum pl_strategy {
  PL_STRATEGY_GREEDY_SIEVE = 0,
  PL_STRATEGY_PRIMES_PAST_K = 1,
  PL_STRATEGY_SHIFTED_SCHINZEL = 2
} pl_strategy;
PL_API pl_status pl_strategy_parse(const char* name, pl_strategy* out);
PL_API pl_status pl_narrow_admissible_tuple(size_t k, pl_strategy strategy, pl_tuple** out);

/* [start, start + length] */
typedef struct pl_interval {
  uint64_t start;
  uint64_t length;
} pl_interval;
/* "10-20,100-200", inclusive endpoints. */
PL_API pl_status pl_intervals_parse(const char* text, pl_interval* out, size_t capacity, size_t* count);
PL_API pl_status pl_tuple_in_intervals(const pl_interval* chain, size_t n, pl_tuple** out,
                                       int* differences_contained, int* growth_condition);

/* ---- singular series --------------------------------------------------- */

typedef struct pl_series_value {
  double value;
  double tail_bound;
  uint64_t truncation_prime;
} pl_series_value;
PL_API pl_status pl_singular_series(const pl_tuple* t, uint64_t P, pl_series_value* out);
PL_API pl_status pl_gallagher_average(const pl_tuple* t, uint64_t hmax, uint64_t P, double* out);

/* ---- sieve weights ----------------------------------------------------- */

typedef struct pl_weight_params {
  const pl_tuple* tuple;
  unsigned ell;
  double R;
  int has_window; /* restrict prime factors of d to [window_min, window_max] */
  uint64_t window_min;
  uint64_t window_max;
} pl_weight_params;

typedef struct pl_ratio_report {
  double sum;
  double restricted_sum;
  double ratio;
  double bound;
  double constant; /* ratio / bound */
} pl_ratio_report;

PL_API pl_status pl_lambda_R(uint64_t n, const pl_weight_params* params, double* out);
PL_API pl_status pl_weighted_sum(uint64_t N, const pl_weight_params* params, double* out);
PL_API pl_status pl_lemma1_ratio(uint64_t N, const pl_weight_params* params, uint64_t p, pl_ratio_report* out);
/* out must hold `count` reports. */
PL_API pl_status pl_lemma1_sweep(uint64_t N, const pl_weight_params* params, const uint64_t* primes, size_t count,
                                 pl_ratio_report* out);
PL_API pl_status pl_rough_sum_fraction(uint64_t N, const pl_weight_params* params, double eta,
                                       pl_ratio_report* out);

typedef struct pl_survivor_count {
  uint64_t count;
  double paper_bound_scale;
  int has_ratio;
  double ratio;
} pl_survivor_count;
PL_API pl_status pl_selberg_survivor_count(uint64_t N, const pl_tuple* t, double alpha, pl_survivor_count* out);

/* ---- gap statistics ---------------------------------------------------- */

typedef struct pl_gap_record {
  uint64_t index;
  uint64_t prime;
  uint64_t gap;
} pl_gap_record;
/* Return nonzero to stop early. */
typedef int (*pl_gap_callback)(const pl_gap_record* record, void* user);
PL_API pl_status pl_gap_stream(uint64_t limit, pl_gap_callback fn, void* user);

typedef enum pl_gap_normalization { PL_NORM_LOG_PRIME = 0, PL_NORM_LOG_INDEX = 1 } pl_gap_normalization;
PL_API pl_status pl_mean_normalized_gap(uint64_t limit, pl_gap_normalization norm, double* out);

typedef struct pl_test_function pl_test_function;
/* "log", "gpy-half", "pintz-3/7", "power:a", "const:c" */
PL_API pl_status pl_test_function_parse(const char* spec, pl_test_function** out);
typedef double (*pl_eval_fn)(uint64_t n, void* user);
PL_API pl_status pl_test_function_custom(const char* name, pl_eval_fn fn, void* user, pl_test_function** out);
PL_API void pl_test_function_free(pl_test_function* f);

typedef struct pl_oscillation_report {
  int passes;
  int has_threshold;
  uint64_t threshold;
  int has_first_violation;
  uint64_t first_violation;
  int has_last_violation;
  uint64_t last_violation;
  uint64_t blocks_checked;
} pl_oscillation_report;
PL_API pl_status pl_slow_oscillation_check(const pl_test_function* f, uint64_t Nmax, double eps,
                                           pl_oscillation_report* out);

typedef struct pl_histogram pl_histogram;
typedef struct pl_histogram_summary {
  double range_hi;
  uint64_t underflow;
  uint64_t overflow;
  uint64_t invalid;
  uint64_t total;
  int has_min;
  double min_value;
  pl_gap_record argmin;
} pl_histogram_summary;
PL_API pl_status pl_limit_point_histogram(uint64_t limit, const pl_test_function* f, size_t bins, double range_hi,
                                          pl_histogram** out);
PL_API size_t pl_histogram_bins(const pl_histogram* h);
PL_API const uint64_t* pl_histogram_counts(const pl_histogram* h);
PL_API void pl_histogram_summary_get(const pl_histogram* h, pl_histogram_summary* out);
PL_API void pl_histogram_free(pl_histogram* h);

typedef struct pl_ratio_witness {
  uint64_t index;
  uint64_t prime;
  uint64_t gap;
  uint64_t next_gap;
  double value;
} pl_ratio_witness;
typedef struct pl_ratio_extremes {
  pl_ratio_witness min_ratio;
  pl_ratio_witness max_ratio;
  pl_ratio_witness min_ratio_scaled;
  pl_ratio_witness max_ratio_scaled;
  uint64_t pairs;
} pl_ratio_extremes;
PL_API pl_status pl_ratio_extremes_compute(uint64_t limit, pl_ratio_extremes* out);

typedef enum pl_census_kind { PL_CENSUS_STRONG = 0, PL_CENSUS_WEAK = 1 } pl_census_kind;
typedef struct pl_census pl_census;
PL_API pl_status pl_polignac_census(uint64_t limit, uint64_t max_even, pl_census_kind kind, pl_census** out);
PL_API uint64_t pl_census_max_even(const pl_census* c);
PL_API pl_status pl_census_count(const pl_census* c, uint64_t even, uint64_t* out);
PL_API uint64_t pl_census_overflow(const pl_census* c);
PL_API void pl_census_free(pl_census* c);

typedef struct pl_polignac_density {
  uint64_t k;
  double value;
  double asymptote;
  char* numerator; /* NULL unless computed exactly */
  char* denominator;
} pl_polignac_density;
PL_API pl_status pl_polignac_density_lower(uint64_t k, int exact, pl_polignac_density* out);
PL_API void pl_polignac_density_release(pl_polignac_density* d);

/* ---- constellations ---------------------------------------------------- */

typedef struct pl_constellation_count {
  uint64_t count;
  double series;
  double hl_prediction;
  double integral_prediction;
} pl_constellation_count;
PL_API pl_status pl_count_constellations(const pl_tuple* t, uint64_t x, pl_constellation_count* out);

typedef struct pl_dhl_witness {
  uint64_t n;
  uint64_t prime_mask; /* bit i-1 <-> n + h_i prime */
  int has_pair;
  uint32_t pair_i; /* 1-based */
  uint32_t pair_j;
  int almost_prime;
} pl_dhl_witness;
typedef int (*pl_dhl_callback)(const pl_dhl_witness* w, void* user);
PL_API pl_status pl_dhl_witnesses(const pl_tuple* t, uint64_t N, double c1, pl_dhl_callback fn, void* user);
PL_API pl_status pl_consecutive_pair_count(const pl_tuple* t, size_t i, size_t j, uint64_t N, double c1,
                                           uint64_t* out);

typedef struct pl_twin_ap {
  uint64_t start;
  uint64_t step;
  uint32_t length;
} pl_twin_ap;
typedef int (*pl_ap_callback)(const pl_twin_ap* ap, void* user);
PL_API pl_status pl_twin_ap_search(uint64_t d, unsigned L, uint64_t limit, int require_consecutive,
                                   pl_ap_callback fn, void* user);

typedef struct pl_discrepancy pl_discrepancy;
typedef struct pl_residue_discrepancy {
  uint64_t q;
  uint64_t worst_residue;
  double discrepancy;
  double coprime_mass;
  double non_coprime_mass;
  int conserved; /* coprime + non-coprime masses equal theta(X) exactly */
} pl_residue_discrepancy;
typedef struct pl_discrepancy_summary {
  uint64_t X;
  uint64_t Q;
  double total;
  double theta_exponent;
  double theta;
  int conserved; /* every q conserves */
} pl_discrepancy_summary;
PL_API pl_status pl_bv_discrepancy(uint64_t X, uint64_t Q, pl_discrepancy** out);
PL_API size_t pl_discrepancy_size(const pl_discrepancy* d);
PL_API pl_status pl_discrepancy_entry(const pl_discrepancy* d, size_t i, pl_residue_discrepancy* out);
PL_API void pl_discrepancy_summary_get(const pl_discrepancy* d, pl_discrepancy_summary* out);
PL_API void pl_discrepancy_free(pl_discrepancy* d);

#ifdef __cplusplus
}
#endif

#endif /* PRIMELAB_H */
