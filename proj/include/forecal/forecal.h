/*
 * Copyright 2026 The forecal Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/* C interface to the forecal library.
 *
 * Objects are opaque handles created by *_create / *_play functions and
 * released with the matching *_destroy. Every fallible call returns a
 * forecal_status; on failure forecal_last_error() describes the problem
 * (per thread, valid until the next failing call on that thread). Strings
 * returned through char** out-parameters are heap allocated and must be
 * released with forecal_string_free.
 *
 * Bit strings are ASCII '0'/'1'. Rule lists are comma separated:
 * all, high, low, parity(m:r), prev_bit(b), band(lo:hi).
 */

#ifndef FORECAL_FORECAL_H
#define FORECAL_FORECAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FORECAL_BUILDING)
#    define FORECAL_API __declspec(dllexport)
#  else
#    define FORECAL_API __declspec(dllimport)
#  endif
#else
#  define FORECAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum forecal_status {
    FORECAL_OK = 0,
    FORECAL_ERR_INTERNAL = 1,
    FORECAL_ERR_CONFIG = 2, /* configuration, argument or input error */
    FORECAL_ERR_INVALID_FORECAST = 3,
    FORECAL_ERR_CAP_EXCEEDED = 4,
    FORECAL_ERR_IO = 5
} forecal_status;

typedef struct forecal_forecaster forecal_forecaster;
typedef struct forecal_audit forecal_audit;
typedef struct forecal_transcript forecal_transcript;

FORECAL_API const char* forecal_version(void);
FORECAL_API const char* forecal_last_error(void);
FORECAL_API void forecal_string_free(char* s);

/* ---- forecasters ------------------------------------------------------ */

/* descriptor_json e.g. {"type":"beta_bernoulli","alpha":1,"beta":1} */
FORECAL_API forecal_status forecal_forecaster_create(const char* descriptor_json,
                                                     forecal_forecaster** out);
FORECAL_API void forecal_forecaster_destroy(forecal_forecaster* f);
FORECAL_API forecal_status forecal_forecaster_forecast(const forecal_forecaster* f,
                                                       const char* prefix, double* out);
FORECAL_API forecal_status forecal_forecaster_descriptor(const forecal_forecaster* f,
                                                         char** out_json);

/* ---- natures ---------------------------------------------------------- */

/* 1 iff forecast < 0.5 */
FORECAL_API forecal_status forecal_oakes_dawid_bit(double forecast, int* out_bit);
FORECAL_API forecal_status forecal_adversarial_stream(const forecal_forecaster* f,
                                                      int64_t horizon, char** out_bits);
FORECAL_API forecal_status forecal_predictive_sample(const forecal_forecaster* f,
                                                     int64_t horizon, uint64_t seed,
                                                     char** out_bits);

/* ---- calibration audits ----------------------------------------------- */

/* checkpoints may be NULL (default schedule: powers of two and the horizon). */
FORECAL_API forecal_status forecal_audit_fixed(const forecal_forecaster* f, const char* outcomes,
                                               const char* rules, int64_t horizon,
                                               const int64_t* checkpoints, size_t n_checkpoints,
                                               forecal_audit** out);
FORECAL_API forecal_status forecal_audit_adversarial(const forecal_forecaster* f,
                                                     const char* rules, int64_t horizon,
                                                     const int64_t* checkpoints,
                                                     size_t n_checkpoints, forecal_audit** out);
FORECAL_API void forecal_audit_destroy(forecal_audit* a);
FORECAL_API size_t forecal_audit_rule_count(const forecal_audit* a);
/* name stays valid for the lifetime of the audit */
FORECAL_API forecal_status forecal_audit_rule(const forecal_audit* a, size_t index,
                                              const char** name, int64_t* count, double* sum);
FORECAL_API forecal_status forecal_audit_csv(const forecal_audit* a, char** out_csv);
FORECAL_API forecal_status forecal_audit_verdict_json(const forecal_audit* a, double tolerance,
                                                      int64_t burn_in, char** out_json);

/* ---- Banach-Mazur games ----------------------------------------------- */

enum {
    FORECAL_CONDITION_NONE = -1,
    FORECAL_CONDITION_LOW_MEAN_HIGH = 0, /* low-bucket mean >= 0.25 */
    FORECAL_CONDITION_HIGH_MEAN_LOW = 1  /* high-bucket mean <= -0.25 */
};

/* player1_json e.g. {"type":"random","n":100}; cap_per_turn 0 = termination bound only */
FORECAL_API forecal_status forecal_game_play(const forecal_forecaster* f,
                                             const char* player1_json, int64_t rounds,
                                             uint64_t seed, int64_t cap_per_turn,
                                             forecal_transcript** out);
FORECAL_API void forecal_transcript_destroy(forecal_transcript* t);
FORECAL_API size_t forecal_transcript_move_count(const forecal_transcript* t);
FORECAL_API forecal_status forecal_transcript_move(const forecal_transcript* t, size_t index,
                                                   int* player, int64_t* length,
                                                   int64_t* day_count_after, int* condition);
FORECAL_API forecal_status forecal_transcript_sequence(const forecal_transcript* t,
                                                       char** out_bits);
FORECAL_API forecal_status forecal_transcript_jsonl(const forecal_transcript* t, char** out);

/* ---- Monte Carlo ------------------------------------------------------ */

FORECAL_API forecal_status forecal_mc_check(const forecal_forecaster* f, const char* rules,
                                            int64_t horizon, int64_t runs, double tolerance,
                                            uint64_t seed, unsigned workers,
                                            char** out_report_json);

/* ---- commands --------------------------------------------------------- */

typedef struct forecal_options {
    const char* config_path;
    const char* out_dir;
    int has_seed;
    uint64_t seed;
    int has_horizon;
    int64_t horizon;
    int quiet;
    unsigned workers;
    const char* forecaster_json; /* game, sample */
    const char* player1;         /* game: fixed:<bits> | random:<n> | sampler:<n> */
    int has_rounds;
    int64_t rounds;
    const char* trace_path; /* audit */
    const char* rules;      /* audit */
    int has_tolerance;
    double tolerance;
} forecal_options;

FORECAL_API void forecal_options_init(forecal_options* options);

/* Summaries go to stdout unless options->quiet. */
FORECAL_API forecal_status forecal_cmd_run(const forecal_options* options);
FORECAL_API forecal_status forecal_cmd_game(const forecal_options* options);
FORECAL_API forecal_status forecal_cmd_mc(const forecal_options* options);
FORECAL_API forecal_status forecal_cmd_audit(const forecal_options* options);
FORECAL_API forecal_status forecal_cmd_sample(const forecal_options* options);

#ifdef __cplusplus
}
#endif

#endif /* FORECAL_FORECAL_H */
