/*
 * leadalloc C API.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_free function. Functions return la_status; on failure the
 * message and any row-located diagnostics are available through
 * la_last_error_message() and la_diagnostic_*() until the next call on the
 * same thread. Warnings produced by a successful call are reported the same
 * way.
 *
 * Strings returned as `const char*` are owned by the handle they came from.
 * Strings returned through `char**` are heap copies freed with la_string_free.
 */
#ifndef LEADALLOC_H
#define LEADALLOC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LEADALLOC_BUILDING)
#    define LEADALLOC_API __declspec(dllexport)
#  else
#    define LEADALLOC_API __declspec(dllimport)
#  endif
#else
#  define LEADALLOC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum la_status {
  LA_OK = 0,
  LA_ERR_INVALID_ARGUMENT = 1,
  LA_ERR_VALIDATION = 2,
  LA_ERR_IO = 3,
  LA_ERR_UNDEFINED_CORRELATION = 4,
  LA_ERR_UNKNOWN_FACTOR = 5,
  LA_ERR_INSUFFICIENT_DATA = 6,
  LA_ERR_INVALID_NAME = 7,
  LA_ERR_INTERNAL = 99
} la_status;

typedef enum la_severity { LA_SEVERITY_ERROR = 0, LA_SEVERITY_WARNING = 1 } la_severity;

typedef enum la_weight_variant { LA_VARIANT_TEXT = 0, LA_VARIANT_ALGORITHM = 1 } la_weight_variant;

typedef enum la_estimator { LA_ESTIMATOR_PEARSON = 0, LA_ESTIMATOR_SPEARMAN = 1 } la_estimator;

typedef enum la_strategy {
  LA_STRATEGY_PROPORTIONAL = 0,
  LA_STRATEGY_TOP_K_EQUAL = 1,
  LA_STRATEGY_RANK_WEIGHTED = 2
} la_strategy;

typedef struct la_aliases la_aliases;
typedef struct la_dataset la_dataset;
typedef struct la_correlations la_correlations;
typedef struct la_ranking la_ranking;
typedef struct la_plan la_plan;
typedef struct la_runs la_runs;
typedef struct la_targets la_targets;
typedef struct la_report la_report;

/* ---- diagnostics ------------------------------------------------------- */

LEADALLOC_API const char* la_version(void);
LEADALLOC_API const char* la_status_name(la_status status);
LEADALLOC_API const char* la_last_error_message(void);
LEADALLOC_API size_t la_diagnostic_count(void);
LEADALLOC_API la_severity la_diagnostic_severity(size_t i);
/* 1-based CSV line, or -1 when the diagnostic has no row. */
LEADALLOC_API int64_t la_diagnostic_row(size_t i);
LEADALLOC_API const char* la_diagnostic_location(size_t i);
LEADALLOC_API const char* la_diagnostic_message(size_t i);

LEADALLOC_API void la_string_free(char* s);

/* ---- names ------------------------------------------------------------- */

LEADALLOC_API la_status la_aliases_load(const char* path, la_aliases** out);
LEADALLOC_API la_status la_aliases_parse(const char* json, size_t len, la_aliases** out);
LEADALLOC_API void la_aliases_free(la_aliases* aliases);

/* aliases may be NULL. */
LEADALLOC_API la_status la_canonicalize(const la_aliases* aliases, const char* raw, char** out);

/* ---- ingest ------------------------------------------------------------ */

typedef struct la_ingest_options {
  int strict;                 /* non-zero: warnings become errors */
  const la_aliases* aliases;  /* may be NULL */
} la_ingest_options;

/* options may be NULL for defaults. */
LEADALLOC_API la_status la_dataset_load(const char* path, const char* city,
                                        const la_ingest_options* options, la_dataset** out);
LEADALLOC_API la_status la_dataset_parse(const char* csv, size_t len, const char* city,
                                         const la_ingest_options* options, la_dataset** out);
LEADALLOC_API void la_dataset_free(la_dataset* dataset);
LEADALLOC_API size_t la_dataset_size(const la_dataset* dataset);
LEADALLOC_API const char* la_dataset_city(const la_dataset* dataset);
LEADALLOC_API double la_dataset_bll_threshold(const la_dataset* dataset);
LEADALLOC_API const char* la_dataset_name(const la_dataset* dataset, size_t i);
LEADALLOC_API la_status la_dataset_metrics(const la_dataset* dataset, size_t i, double* prevalence,
                                           double* untested_pct, double* public_coverage_pct);
LEADALLOC_API la_status la_dataset_to_csv(const la_dataset* dataset, char** out);

LEADALLOC_API la_status la_runs_load(const char* path, const la_ingest_options* options, la_runs** out);
LEADALLOC_API la_status la_runs_parse(const char* json, size_t len, const la_ingest_options* options,
                                      la_runs** out);
LEADALLOC_API void la_runs_free(la_runs* runs);
LEADALLOC_API size_t la_runs_size(const la_runs* runs);
LEADALLOC_API const char* la_runs_model(const la_runs* runs, size_t i);
LEADALLOC_API const char* la_runs_mode(const la_runs* runs, size_t i);

LEADALLOC_API la_status la_targets_load(const char* path, const la_ingest_options* options,
                                        la_targets** out);
LEADALLOC_API la_status la_targets_parse(const char* json, size_t len, const la_ingest_options* options,
                                         la_targets** out);
LEADALLOC_API void la_targets_free(la_targets* targets);
LEADALLOC_API size_t la_targets_city_count(const la_targets* targets);
LEADALLOC_API const char* la_targets_city(const la_targets* targets, size_t i);

/* ---- statistics -------------------------------------------------------- */

LEADALLOC_API la_status la_pearson(const double* x, const double* y, size_t n, double* r);

/* factors may be NULL with n_factors == 0: every column except prevalence. */
LEADALLOC_API la_status la_correlate(const la_dataset* dataset, const char* const* factors,
                                     size_t n_factors, la_estimator estimator, la_correlations** out);
LEADALLOC_API void la_correlations_free(la_correlations* c);
LEADALLOC_API size_t la_correlations_size(const la_correlations* c);
LEADALLOC_API const char* la_correlations_factor(const la_correlations* c, size_t i);
LEADALLOC_API double la_correlations_r(const la_correlations* c, size_t i);
LEADALLOC_API size_t la_correlations_n(const la_correlations* c, size_t i);
LEADALLOC_API la_status la_correlations_to_json(const la_correlations* c, char** out);

/* ---- scoring ----------------------------------------------------------- */

typedef struct la_weights {
  double base_alpha;
  double alpha;
  double beta;
  double gamma;
  double source_correlation;
  la_weight_variant variant;
  int correlation_clamped;
  int normalized;
} la_weights;

LEADALLOC_API la_status la_derive_weights(double r, double alpha, la_weight_variant variant,
                                          int normalize, la_weights* out);

typedef struct la_score_options {
  double alpha;
  la_weight_variant variant;
  int has_r_override;
  double r_override;
  int normalize_weights;
} la_score_options;

LEADALLOC_API void la_score_options_init(la_score_options* options);

typedef struct la_ranked_entry {
  const char* name;
  const char* display_name;
  double raw_score;
  double scaled_score;
  double prevalence;
  double untested_pct;
  double public_coverage_pct;
} la_ranked_entry;

LEADALLOC_API la_status la_score(const la_dataset* dataset, const la_score_options* options,
                                 la_ranking** out);
LEADALLOC_API la_status la_ranking_load(const char* path, la_ranking** out);
LEADALLOC_API la_status la_ranking_parse(const char* json, size_t len, la_ranking** out);
LEADALLOC_API void la_ranking_free(la_ranking* ranking);
LEADALLOC_API size_t la_ranking_size(const la_ranking* ranking);
LEADALLOC_API const char* la_ranking_city(const la_ranking* ranking);
LEADALLOC_API la_status la_ranking_entry(const la_ranking* ranking, size_t i, la_ranked_entry* out);
LEADALLOC_API la_status la_ranking_weights(const la_ranking* ranking, la_weights* out);
LEADALLOC_API size_t la_ranking_warning_count(const la_ranking* ranking);
LEADALLOC_API const char* la_ranking_warning(const la_ranking* ranking, size_t i);
LEADALLOC_API la_status la_ranking_to_json(const la_ranking* ranking, char** out);

/* Writes up to `capacity` canonical names; *count receives min(k, size). */
LEADALLOC_API la_status la_ranking_top_k(const la_ranking* ranking, size_t k, const char** names,
                                         size_t capacity, size_t* count);

/* ---- allocation -------------------------------------------------------- */

typedef struct la_allocation_params {
  size_t k;       /* top_k_equal */
  int64_t floor;  /* kits guaranteed to every neighborhood */
} la_allocation_params;

LEADALLOC_API void la_allocation_params_init(la_allocation_params* params);
LEADALLOC_API la_status la_allocate(const la_ranking* ranking, int64_t total_kits, la_strategy strategy,
                                    const la_allocation_params* params, la_plan** out);
LEADALLOC_API void la_plan_free(la_plan* plan);
LEADALLOC_API size_t la_plan_size(const la_plan* plan);
LEADALLOC_API int64_t la_plan_total(const la_plan* plan);
LEADALLOC_API const char* la_plan_method(const la_plan* plan);
LEADALLOC_API la_status la_plan_entry(const la_plan* plan, size_t i, const char** name,
                                      const char** display_name, int64_t* kits);
LEADALLOC_API size_t la_plan_warning_count(const la_plan* plan);
LEADALLOC_API const char* la_plan_warning(const la_plan* plan, size_t i);
LEADALLOC_API la_status la_plan_to_json(const la_plan* plan, char** out);

/* ---- evaluation -------------------------------------------------------- */

typedef struct la_run_accuracy {
  const char* model;
  const char* mode;
  int64_t total_hits;
  int64_t denominator;
} la_run_accuracy;

LEADALLOC_API la_status la_evaluate(const la_runs* runs, const la_targets* targets, size_t k,
                                    la_report** out);
LEADALLOC_API void la_report_free(la_report* report);
LEADALLOC_API size_t la_report_size(const la_report* report);
LEADALLOC_API la_status la_report_run(const la_report* report, size_t i, la_run_accuracy* out);
/* Hits for one target city of run i; LA_ERR_INVALID_ARGUMENT for unknown cities. */
LEADALLOC_API la_status la_report_city_hits(const la_report* report, size_t i, const char* city,
                                            int64_t* hits);
LEADALLOC_API void la_report_pooled(const la_report* report, int64_t* num, int64_t* den);
LEADALLOC_API void la_report_per_run_mean(const la_report* report, int64_t* num, int64_t* den);
LEADALLOC_API la_status la_report_to_json(const la_report* report, char** out);

/* Decimal rendering of num/den truncated toward zero. */
LEADALLOC_API la_status la_format_truncated(int64_t num, int64_t den, int digits, char** out);

#ifdef __cplusplus
}
#endif

#endif /* LEADALLOC_H */
