#ifndef SIGMOD_SIGMOD_H
#define SIGMOD_SIGMOD_H

#include <stddef.h>

#if defined(_WIN32)
#define SIGMOD_API __declspec(dllexport)
#else
#define SIGMOD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every library failure class has its own code. */
typedef enum sigmod_status {
    SIGMOD_OK = 0,
    SIGMOD_DIVISION_BY_ZERO,
    SIGMOD_PRECISION_EXHAUSTED,
    SIGMOD_AMBIGUOUS_VALUATION,
    SIGMOD_NUMERICAL_FAILURE,
    SIGMOD_WINDOW_OVERFLOW,
    SIGMOD_NOT_A_UNIT,
    SIGMOD_MEMBERSHIP_VIOLATED,
    SIGMOD_SINGULAR_FROBENIUS,
    SIGMOD_SINGULAR_INPUT,
    SIGMOD_NOT_FACTORABLE,
    SIGMOD_NOT_CONVERGED,
    SIGMOD_NON_UNIT_PIVOT,
    SIGMOD_NOT_HORIZONTAL,
    SIGMOD_PRECONDITION_FAILED,
    SIGMOD_COCYCLE_VIOLATED,
    SIGMOD_PARSE_ERROR,
    SIGMOD_INVALID_ARGUMENT,
    SIGMOD_NULL_ARGUMENT
} sigmod_status;

typedef struct sigmod_config sigmod_config;
typedef struct sigmod_report sigmod_report;

SIGMOD_API const char* sigmod_version(void);
/* Name of a status, e.g. "PrecisionExhausted". */
SIGMOD_API const char* sigmod_status_name(sigmod_status status);
/* Message of the last failing call on this thread; empty after success. */
SIGMOD_API const char* sigmod_last_error(void);

SIGMOD_API sigmod_status sigmod_config_new(sigmod_config** out);
SIGMOD_API void sigmod_config_free(sigmod_config* config);
/*
 * Keys: p, f, prec, window, kmax, nmax, tol, mode. Values are decimal text.
 * p, f and prec left unset are taken from the input document.
 */
SIGMOD_API sigmod_status sigmod_config_set(sigmod_config* config, const char* key, const char* value);

/* Space-separated list of command names. */
SIGMOD_API const char* sigmod_commands(void);

/*
 * Runs a command on a JSON document. A report is produced whenever the
 * arguments are non-null, also when the computation fails; the return value
 * is the status of the computation.
 */
SIGMOD_API sigmod_status sigmod_run(const sigmod_config* config, const char* command, const char* input, size_t input_len,
                                    sigmod_report** out);

SIGMOD_API const char* sigmod_report_text(const sigmod_report* report);
SIGMOD_API const char* sigmod_report_verdict(const sigmod_report* report);
/* 0 for affirmative verdicts, 1 for mathematical failures, 2 for bad input. */
SIGMOD_API int sigmod_report_exit_code(const sigmod_report* report);
SIGMOD_API sigmod_status sigmod_report_status(const sigmod_report* report);
SIGMOD_API void sigmod_report_free(sigmod_report* report);

#ifdef __cplusplus
}
#endif

#endif
