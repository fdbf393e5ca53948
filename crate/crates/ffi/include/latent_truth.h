#ifndef LATENT_TRUTH_H
#define LATENT_TRUTH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LtmStatus {
  LTM_STATUS_OK = 0,
  LTM_STATUS_NULL_POINTER = 1,
  LTM_STATUS_INVALID_ARGUMENT = 2,
  LTM_STATUS_PARSE_ERROR = 3,
  LTM_STATUS_DATA_ERROR = 4,
  LTM_STATUS_IO_ERROR = 5,
  LTM_STATUS_TOO_LARGE = 6,
  LTM_STATUS_PANIC = 7,
} LtmStatus;

typedef struct LtmDatabase LtmDatabase;

typedef struct LtmQuality LtmQuality;

// Accumulates raw triples before the tables are built.
typedef struct LtmTriples LtmTriples;

typedef struct LtmTruth LtmTruth;

// Beta pseudo-counts; `*_one` counts the outcome 1 (positive claim or true fact).
typedef struct LtmHyperparameters {
  double alpha0_one;
  double alpha0_zero;
  double alpha1_one;
  double alpha1_zero;
  double beta_one;
  double beta_zero;
} LtmHyperparameters;

typedef struct LtmSamplerConfig {
  size_t iterations;
  size_t burn_in;
  size_t thin;
  uint64_t seed;
  double threshold;
} LtmSamplerConfig;

typedef struct LtmSourceQuality {
  double sensitivity;
  double specificity;
  double precision;
  double expected_tp;
  double expected_fp;
  double expected_fn;
  double expected_tn;
} LtmSourceQuality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a
// success. Valid until the next `ltm_*` call on the same thread.
const char *ltm_last_error_message(void);

// Default priors for a corpus of `num_facts` facts.
struct LtmHyperparameters ltm_default_hyperparameters(size_t num_facts);

// 500 sweeps, burn-in 100, thinning 10, seed 0, threshold 0.5.
struct LtmSamplerConfig ltm_default_sampler_config(void);

struct LtmTriples *ltm_triples_new(void);

// Adds one assertion. Fields are trimmed and must be non-empty.
//
// # Safety
// `triples` must come from [`ltm_triples_new`]; the strings must be
// NUL-terminated.
enum LtmStatus ltm_triples_add(struct LtmTriples *triples,
                               const char *entity,
                               const char *attribute,
                               const char *source);

// # Safety
// `triples` must be null or come from [`ltm_triples_new`].
void ltm_triples_free(struct LtmTriples *triples);

// Builds the fact and claim tables.
//
// # Safety
// `triples` must be a live handle and `out` writable.
enum LtmStatus ltm_database_from_triples(const struct LtmTriples *triples,
                                         struct LtmDatabase **out);

// Reads an `entity,attribute,source` CSV file.
//
// # Safety
// `path` must be NUL-terminated and `out` writable.
enum LtmStatus ltm_database_from_csv(const char *path, struct LtmDatabase **out);

// # Safety
// `db` must be null or a live database handle.
size_t ltm_database_num_facts(const struct LtmDatabase *db);

// # Safety
// `db` must be null or a live database handle.
size_t ltm_database_num_sources(const struct LtmDatabase *db);

// # Safety
// `db` must be null or a live database handle.
size_t ltm_database_num_claims(const struct LtmDatabase *db);

// Looks up the id of `(entity, attribute)`; returns `DataError` when absent.
//
// # Safety
// `db` must be a live handle, the strings NUL-terminated, `out` writable.
enum LtmStatus ltm_database_fact_id(const struct LtmDatabase *db,
                                    const char *entity,
                                    const char *attribute,
                                    size_t *out);

// # Safety
// `db` must be null or a live database handle.
void ltm_database_free(struct LtmDatabase *db);

// Fits the model by collapsed Gibbs sampling with `chains` concurrent
// chains. A null `hyperparameters` selects the defaults for the corpus
// size and a null `config` the default sampler settings.
//
// # Safety
// `db` must be live, the optional pointers null or valid, `out` writable.
enum LtmStatus ltm_run(const struct LtmDatabase *db,
                       const struct LtmHyperparameters *hyperparameters,
                       const struct LtmSamplerConfig *config,
                       size_t chains,
                       struct LtmTruth **out);

// Exact posterior marginals by enumeration; `TooLarge` above 20 facts.
//
// # Safety
// `db` must be live, `hyperparameters` null or valid, `out` writable.
enum LtmStatus ltm_exact_marginals(const struct LtmDatabase *db,
                                   const struct LtmHyperparameters *hyperparameters,
                                   double threshold,
                                   struct LtmTruth **out);

// Fraction of positive claims per fact.
//
// # Safety
// `db` must be live and `out` writable.
enum LtmStatus ltm_voting(const struct LtmDatabase *db, double threshold, struct LtmTruth **out);

// # Safety
// `truth` must be null or a live handle.
size_t ltm_truth_len(const struct LtmTruth *truth);

// Copies probabilities and labels into caller buffers of length `len`,
// which must equal [`ltm_truth_len`]. Either buffer may be null.
//
// # Safety
// Non-null buffers must hold `len` writable elements.
enum LtmStatus ltm_truth_copy(const struct LtmTruth *truth,
                              double *probabilities,
                              bool *labels,
                              size_t len);

// # Safety
// `truth` must be null or a live handle.
void ltm_truth_free(struct LtmTruth *truth);

// MAP source quality given per-fact truth probabilities.
//
// # Safety
// Handles must be live, `hyperparameters` null or valid, `out` writable.
enum LtmStatus ltm_estimate_quality(const struct LtmDatabase *db,
                                    const struct LtmTruth *truth,
                                    const struct LtmHyperparameters *hyperparameters,
                                    struct LtmQuality **out);

// # Safety
// `quality` must be null or a live handle.
size_t ltm_quality_len(const struct LtmQuality *quality);

// Quality of source `index`.
//
// # Safety
// `quality` must be live and `out` writable.
enum LtmStatus ltm_quality_get(const struct LtmQuality *quality,
                               size_t index,
                               struct LtmSourceQuality *out);

// Name of source `index`, owned by the handle; null when out of range.
//
// # Safety
// `quality` must be null or a live handle.
const char *ltm_quality_source_name(const struct LtmQuality *quality, size_t index);

// # Safety
// `quality` must be null or a live handle.
void ltm_quality_free(struct LtmQuality *quality);

// Truth of the facts in `db` with source quality frozen at `quality`.
// Sources absent from `quality` use the prior means of `hyperparameters`.
//
// # Safety
// Handles must be live, `hyperparameters` valid, `out` writable.
enum LtmStatus ltm_predict_frozen(const struct LtmDatabase *db,
                                  const struct LtmQuality *quality,
                                  const struct LtmHyperparameters *hyperparameters,
                                  double threshold,
                                  struct LtmTruth **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATENT_TRUTH_H */
