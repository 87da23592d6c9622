/* C API for the causal effect estimation engine.
 *
 * All functions return a causal_status; on failure the out-parameters are
 * untouched and causal_last_error() returns a thread-local message.
 * Handles are opaque and must be released with the matching _free call;
 * strings returned through char** out-parameters are owned by the caller
 * and released with causal_string_free().
 */
#ifndef CAUSAL_CAUSAL_H
#define CAUSAL_CAUSAL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct causal_graph causal_graph;
typedef struct causal_dataset causal_dataset;

typedef enum causal_status {
  CAUSAL_OK = 0,
  CAUSAL_ERR_PARSE = 1,       /* malformed DOT/CSV/JSON, invalid graph */
  CAUSAL_ERR_ARGUMENT = 2,    /* unknown node/column, bad parameter */
  CAUSAL_ERR_IO = 3,          /* file system failure */
  CAUSAL_ERR_INCOMPATIBLE = 4,/* estimator does not fit the estimand */
  CAUSAL_ERR_UNKNOWN_METHOD = 5,
  CAUSAL_ERR_NUMERIC = 6,     /* collinearity, zero IV denominator */
  CAUSAL_ERR_INTERNAL = 7
} causal_status;

/* Message for the most recent failure on the calling thread. */
const char* causal_last_error(void);

void causal_string_free(char* s);

/* ---- graphs ---- */

causal_status causal_graph_parse(const char* dot_text, causal_graph** out);
causal_status causal_graph_from_file(const char* path, causal_graph** out);
causal_status causal_graph_to_dot(const causal_graph* g, char** out);
size_t causal_graph_node_count(const causal_graph* g);
size_t causal_graph_edge_count(const causal_graph* g);
void causal_graph_free(causal_graph* g);

/* ---- datasets ---- */

causal_status causal_dataset_from_csv(const char* path,
                                      const char* const* required_columns,
                                      size_t n_required,
                                      causal_dataset** out);
causal_status causal_dataset_to_csv(const causal_dataset* d, char** out);
causal_status causal_dataset_save_csv(const causal_dataset* d,
                                      const char* path);
size_t causal_dataset_rows(const causal_dataset* d);
size_t causal_dataset_cols(const causal_dataset* d);
void causal_dataset_free(causal_dataset* d);

/* ---- four-step pipeline ---- */

/* JSON array of estimands plus per-variable role classifications. */
causal_status causal_identify(const causal_graph* g, const char* treatment,
                              const char* outcome, char** json_out);

/* Runs identification, selects the estimand of `estimand_kind` at
 * `estimand_index` (index counts within that kind), estimates with
 * `method`, and returns the EffectEstimate as JSON.
 * Methods: linear_regression, propensity_score_weighting, iv_wald,
 * frontdoor_two_stage. */
causal_status causal_estimate(const causal_graph* g, const causal_dataset* d,
                              const char* treatment, const char* outcome,
                              const char* estimand_kind, size_t estimand_index,
                              const char* method, uint64_t seed,
                              char** json_out);

/* config_json:
 * {
 *   "treatment": "...", "outcome": "...",
 *   "estimand_kind": "backdoor", "estimand_index": 0,
 *   "estimator": "linear_regression", "seed": 0,
 *   "refuters": [
 *     {"name": "placebo_treatment", "replications": 100},
 *     {"name": "data_subset", "fraction": 0.8},
 *     {"name": "simulated_outcome", "true_effect": 10.0},
 *     {"name": "unobserved_common_cause",
 *      "kappa_t_grid": [0,1], "kappa_y_grid": [0,1,2,5],
 *      "replications": 20},
 *     ...
 *   ]
 * }
 * Output JSON: {"estimate": {...}, "reports": [...], "sensitivity": {...}}
 * ("sensitivity" present only when requested). */
causal_status causal_refute(const causal_graph* g, const causal_dataset* d,
                            const char* config_json, char** json_out);

/* ---- simulation ---- */

/* variant 1: instrument DGP (true ATE 10); variant 2: mediator DGP
 * (true ATE 9). */
causal_status causal_simulate_example(int variant, size_t n, uint64_t seed,
                                      causal_dataset** data_out,
                                      causal_graph** graph_out,
                                      double* true_ate_out);

/* config_json: {"n":10000,"num_confounders":1,"num_instruments":1,
 * "include_mediator":false,"effect":10.0,"noise_variance":100.0,"seed":0} */
causal_status causal_simulate_linear(const char* config_json,
                                     causal_dataset** data_out,
                                     causal_graph** graph_out,
                                     double* true_ate_out);

/* Tidy CSV (dataset_index,estimator,ate) and a JSON summary with means,
 * standard deviations and the faulty/correct std ratio. */
causal_status causal_reproduce_figure(int variant, size_t n_datasets,
                                      size_t n, uint64_t seed,
                                      char** table_csv_out,
                                      char** summary_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CAUSAL_CAUSAL_H */
