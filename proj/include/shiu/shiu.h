/*
 * Copyright 2026 The shiu-strings Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libshiu: constructions of admissible tuples whose prime
 * values are consecutive primes in one residue class, their certificates,
 * bound tables and searches for runs of consecutive congruent primes.
 *
 * Conventions:
 *  - Every fallible call returns a shiu_status. On failure the context keeps
 *    a one-line message, available from shiu_context_last_error().
 *  - Strings returned through char** are heap-allocated and owned by the
 *    caller; release them with shiu_string_free().
 *  - A context is not thread-safe. Use one context per thread; internal
 *    parallelism is controlled by shiu_context_set_threads().
 *  - Big integers are exchanged as decimal strings inside JSON payloads.
 */

#ifndef SHIU_H
#define SHIU_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define SHIU_API __declspec(dllexport)
#else
#  define SHIU_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum shiu_status {
  SHIU_OK = 0,
  SHIU_ERR_DOMAIN = 1,           /* invalid or inadmissible input, certificate mismatch */
  SHIU_ERR_NOT_FOUND = 2,        /* search exhausted its height cap */
  SHIU_ERR_RESOURCE = 3,         /* sieve budget, height ceiling, shift cap */
  SHIU_ERR_RANGE = 4,            /* value beyond primality-testing range */
  SHIU_ERR_IO = 5,               /* unreadable or malformed files */
  SHIU_ERR_INTERNAL = 6,         /* internal-consistency failure: a bug */
  SHIU_ERR_INVALID_ARGUMENT = 7  /* null handles, bad enum values */
} shiu_status;

typedef enum shiu_format {
  SHIU_FORMAT_JSON = 0,
  SHIU_FORMAT_CSV = 1,
  SHIU_FORMAT_TEXT = 2
} shiu_format;

typedef struct shiu_context shiu_context;
typedef struct shiu_construction shiu_construction;

/* Receives one line (without trailing newline). Return nonzero to continue,
 * zero to stop the producer early. */
typedef int (*shiu_line_sink)(const char* line, size_t length, void* user);

SHIU_API const char* shiu_version(void);
SHIU_API const char* shiu_status_name(int status);
SHIU_API void shiu_string_free(char* s);

/* Context. Reads SHIU_SIEVE_BUDGET_MB from the environment. */
SHIU_API shiu_status shiu_context_new(shiu_context** out);
SHIU_API void shiu_context_free(shiu_context* ctx);
SHIU_API const char* shiu_context_last_error(const shiu_context* ctx);
SHIU_API shiu_status shiu_context_set_segment_width(shiu_context* ctx, uint64_t width);
SHIU_API shiu_status shiu_context_set_height_ceiling(shiu_context* ctx, uint64_t ceiling);
SHIU_API shiu_status shiu_context_set_budget_bytes(shiu_context* ctx, uint64_t bytes);
SHIU_API shiu_status shiu_context_set_threads(shiu_context* ctx, unsigned threads);
SHIU_API shiu_status shiu_context_set_t_cap(shiu_context* ctx, uint64_t t_cap);
SHIU_API shiu_status shiu_context_load_sieve_cache(shiu_context* ctx, const char* path);

/* Prime engine. */
SHIU_API shiu_status shiu_write_sieve_cache(shiu_context* ctx, uint64_t height, const char* path);
SHIU_API shiu_status shiu_nth_ap_prime(shiu_context* ctx, uint64_t q, int64_t a, uint64_t n, uint64_t* out);
SHIU_API shiu_status shiu_count_ap_primes(shiu_context* ctx, uint64_t q, int64_t a, uint64_t y, uint64_t* out);

/* Tuples. `format` is SHIU_FORMAT_TEXT ("g*x+h" lines) or SHIU_FORMAT_JSON
 * ([[g, h], ...]). The report is {admissible, witness, checked_primes}. */
SHIU_API shiu_status shiu_check_tuple(shiu_context* ctx, const char* tuple, int format, char** report_json);

/* Constructions. m == 0 means "not supplied". */
SHIU_API shiu_status shiu_construct(shiu_context* ctx, uint64_t q, int64_t a, uint64_t k, uint64_t m,
                                    shiu_construction** out);
/* Parses and self-checks a certificate without sieving. */
SHIU_API shiu_status shiu_construction_from_certificate(shiu_context* ctx, const char* json,
                                                        shiu_construction** out);
SHIU_API void shiu_construction_free(shiu_construction* c);
SHIU_API uint64_t shiu_construction_q(const shiu_construction* c);
SHIU_API uint64_t shiu_construction_a(const shiu_construction* c);
SHIU_API uint64_t shiu_construction_k(const shiu_construction* c);
SHIU_API uint64_t shiu_construction_t(const shiu_construction* c);
SHIU_API uint64_t shiu_construction_B(const shiu_construction* c);
SHIU_API size_t shiu_construction_offset_count(const shiu_construction* c);
SHIU_API uint64_t shiu_construction_offset(const shiu_construction* c, size_t i);
SHIU_API shiu_status shiu_construction_certificate(shiu_context* ctx, const shiu_construction* c, int include_g,
                                                   char** out);
SHIU_API shiu_status shiu_construction_tuple_text(shiu_context* ctx, const shiu_construction* c, char** out);
SHIU_API shiu_status shiu_construction_verify_admissible(shiu_context* ctx, const shiu_construction* c,
                                                         char** report_json);
SHIU_API shiu_status shiu_construction_verify_isolation(shiu_context* ctx, const shiu_construction* c,
                                                        char** blocked_json);
SHIU_API shiu_status shiu_construction_walkthrough(shiu_context* ctx, const shiu_construction* c, char** out);
/* One WindowReport JSON object per line, in n order. */
SHIU_API shiu_status shiu_scan_windows(shiu_context* ctx, const shiu_construction* c, uint64_t n_lo, uint64_t n_hi,
                                       shiu_line_sink sink, void* user);
/* Re-derives a certificate. Returns SHIU_ERR_DOMAIN when any field differs;
 * the report {ok, byte_exact, mismatches} is produced either way. */
SHIU_API shiu_status shiu_verify_certificate(shiu_context* ctx, const char* certificate, char** report_json);

/* Bound lab. */
typedef struct shiu_bound_grid {
  uint64_t q_min;
  uint64_t q_max;
  uint64_t k_min;
  uint64_t k_max;
  int fixed_a; /* nonzero: only residue `a`; zero: every residue coprime to q */
  int64_t a;
  double L;
} shiu_bound_grid;

/* CSV or JSON (array of rows). `window_misses`, if non-null, receives the
 * number of rows whose t fell outside the window. */
SHIU_API shiu_status shiu_bound_table(shiu_context* ctx, const shiu_bound_grid* grid, int format,
                                      char** out, size_t* window_misses);
SHIU_API shiu_status shiu_bound_fit(shiu_context* ctx, const shiu_bound_grid* grid, char** fit_json);
SHIU_API shiu_status shiu_verify_t_window(shiu_context* ctx, uint64_t q, int64_t a, uint64_t k, double L,
                                          int* out);

/* Runs of consecutive congruent primes. */
SHIU_API shiu_status shiu_first_string(shiu_context* ctx, uint64_t q, int64_t a, uint64_t m, uint64_t cap,
                                       char** json);
SHIU_API shiu_status shiu_all_strings(shiu_context* ctx, uint64_t q, int64_t a, uint64_t m, uint64_t cap,
                                      int maximal_only, shiu_line_sink sink, void* user);
/* CSV histogram and summary; has_bound selects whether `bound` is compared. */
SHIU_API shiu_status shiu_diameter_stats(shiu_context* ctx, uint64_t q, int64_t a, uint64_t m, uint64_t cap,
                                         uint64_t bucket_width, int has_bound, uint64_t bound, char** csv);

/* Walkthrough of the q = 3, a = 1, k = 5 construction. */
SHIU_API shiu_status shiu_seed_doc(shiu_context* ctx, char** out);

#ifdef __cplusplus
}
#endif

#endif /* SHIU_H */
