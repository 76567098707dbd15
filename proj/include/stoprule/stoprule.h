/*
 * Copyright 2026 The stoprule Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libstoprule.
 *
 * Every fallible call returns an sr_status. On failure the message is
 * available from sr_last_error() on the same thread until the next call.
 * Objects are opaque and owned by the caller once returned; release them with
 * the matching *_free function.
 *
 * The sr_cmd_* entry points produce result tables (one row per output record,
 * fixed column order per command) and back the command-line tool.
 */

#ifndef STOPRULE_H
#define STOPRULE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SR_API __declspec(dllexport)
#else
#define SR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
  SR_OK = 0,
  SR_ERR_DOMAIN = 1,        /* argument outside the operation's domain */
  SR_ERR_INVALID_ARG = 2,   /* null pointer, malformed text, bad index */
  SR_ERR_INTERNAL = 3,      /* a consistency check failed */
  SR_ERR_VERIFY_FAILED = 4, /* sr_cmd_verify found a mismatch; table still set */
  SR_ERR_OUT_OF_MEMORY = 5
} sr_status;

SR_API const char* sr_version(void);
SR_API const char* sr_status_name(sr_status status);
SR_API const char* sr_last_error(void);

/* ---- rule primitives ---------------------------------------------------- */

typedef enum sr_outcome {
  SR_SUCCESS_ADJACENT = 0,
  SR_FAIL_WRAPAROUND = 1,
  SR_FAIL_PREFIX_ONLY = 2,
  SR_FAIL_NO_STOP = 3
} sr_outcome;

typedef struct sr_stop_outcome {
  int32_t stopped;       /* 0 when the rule never stopped */
  int32_t stop_position; /* 1-based j*, 0 when not stopped */
  int32_t first;         /* x[j*-1] */
  int32_t second;        /* x[j*] */
  sr_outcome outcome;
  int32_t at_edge;       /* j* == r */
} sr_stop_outcome;

SR_API sr_status sr_threshold_from_alpha(int32_t n, double alpha, int32_t* r_out);

/* Runs the rule on perm[0..n) (a permutation of 1..n) with threshold r. */
SR_API sr_status sr_run_rule(const int32_t* perm, size_t n, int32_t r, sr_stop_outcome* out);

/* Lambda class: *k_out = k (0 when the permutation is in no Lambda(r, k)). */
SR_API sr_status sr_classify_lambda(const int32_t* perm, size_t n, int32_t r, int32_t* k_out,
                                    int32_t* in_pi_out);

/* Incremental prefix of ranks drawn from 1..n. */
typedef struct sr_prefix sr_prefix;

SR_API sr_status sr_prefix_create(int32_t universe_size, sr_prefix** out);
SR_API void sr_prefix_free(sr_prefix* prefix);
SR_API sr_status sr_prefix_insert(sr_prefix* prefix, int32_t rank);
/* Inserts `next`, then tests adjacency of `prev` and `next` in the prefix. */
SR_API sr_status sr_prefix_pair_adjacent(sr_prefix* prefix, int32_t prev, int32_t next,
                                         int32_t* adjacent_out);
SR_API int32_t sr_prefix_size(const sr_prefix* prefix);

/* ---- exact values ------------------------------------------------------- */

/* Writes the exact success probability |Lambda(r) \ Pi(r)| / n! as "p/q"
 * into buf (NUL-terminated) and its double value into *value (may be NULL).
 * Returns SR_ERR_INVALID_ARG if buf is too small. */
SR_API sr_status sr_success_probability(int32_t n, int32_t r, char* buf, size_t buf_len,
                                        double* value);

/* ---- Monte Carlo -------------------------------------------------------- */

typedef struct sr_estimate {
  int32_t n;
  int32_t r;
  uint64_t trials;
  uint64_t seed;
  double p_hat;
  double std_error;
  double ci95_low;
  double ci95_high;
  uint64_t tallies[4];      /* indexed by sr_outcome */
  uint64_t edge_tallies[4]; /* the subset stopping at j* == r */
} sr_estimate;

SR_API sr_status sr_estimate_run(int32_t n, int32_t r, uint64_t trials, uint64_t seed,
                                 int32_t workers, sr_estimate* out);

/* ---- result tables ------------------------------------------------------ */

typedef enum sr_cell_kind {
  SR_CELL_NULL = 0,
  SR_CELL_INT = 1,
  SR_CELL_REAL = 2,
  SR_CELL_TEXT = 3,
  SR_CELL_BOOL = 4
} sr_cell_kind;

typedef struct sr_table sr_table;

SR_API void sr_table_free(sr_table* table);
SR_API size_t sr_table_rows(const sr_table* table);
SR_API size_t sr_table_columns(const sr_table* table);
SR_API const char* sr_table_column_name(const sr_table* table, size_t col);
SR_API sr_cell_kind sr_table_cell_kind(const sr_table* table, size_t row, size_t col);
/* Canonical text: integers in decimal, reals with 15 significant digits,
 * booleans as true/false, null as the empty string. */
SR_API const char* sr_table_cell_text(const sr_table* table, size_t row, size_t col);
SR_API int64_t sr_table_cell_int(const sr_table* table, size_t row, size_t col);
SR_API double sr_table_cell_real(const sr_table* table, size_t row, size_t col);

/* Options shared by the sr_cmd_* calls. Initialize with sr_config_init. */
typedef struct sr_config {
  int32_t n;
  int32_t r;          /* used when has_r */
  int32_t has_r;
  double alpha;       /* used when has_alpha */
  int32_t has_alpha;
  const char* alphas; /* sweep: "start:end:step" or "a,b,c" */
  uint64_t trials;
  uint64_t seed;
  int32_t workers;
  int32_t force;      /* lift the enumeration / a002464 size guards */
} sr_config;

#define SR_DEFAULT_SEED 42u
#define SR_DEFAULT_TRIALS 100000u

SR_API void sr_config_init(sr_config* config);

SR_API sr_status sr_cmd_formula(const sr_config* config, sr_table** out);
SR_API sr_status sr_cmd_enumerate(const sr_config* config, sr_table** out);
SR_API sr_status sr_cmd_verify(const sr_config* config, sr_table** out);
SR_API sr_status sr_cmd_simulate(const sr_config* config, sr_table** out);
SR_API sr_status sr_cmd_sweep(const sr_config* config, sr_table** out);
SR_API sr_status sr_cmd_a002464(const sr_config* config, sr_table** out);
SR_API sr_status sr_cmd_optimal(const sr_config* config, sr_table** out);

#ifdef __cplusplus
}
#endif

#endif /* STOPRULE_H */
