#ifndef RLC_RLC_H
#define RLC_RLC_H

/*
 * C interface to the relative log-concavity bounds library.
 *
 * Every computation returns a status and, unless the status is
 * RLC_INVALID_INPUT or RLC_INTERNAL_ERROR, an owned result handle that must be
 * released with rlc_result_free. A result holds one document (rendered as
 * canonical JSON, CSV or a text table) and the bound reports it contains.
 * On RLC_NOT_APPLICABLE the result carries the structured explanation.
 * Messages for the last failing call on the current thread are available from
 * rlc_last_error.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define RLC_API __attribute__((visibility("default")))
#else
#define RLC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rlc_status {
  RLC_OK = 0,
  RLC_INVALID_INPUT = 1,
  /* A hypothesis failed: no report in the result applies. */
  RLC_NOT_APPLICABLE = 2,
  /* A verification sweep found instances whose bound does not dominate. */
  RLC_SWEEP_FAILED = 3,
  RLC_INTERNAL_ERROR = 4
} rlc_status;

typedef enum rlc_format { RLC_FORMAT_JSON = 0, RLC_FORMAT_CSV = 1, RLC_FORMAT_TABLE = 2 } rlc_format;

typedef struct rlc_options {
  /* Probability mass allowed to be cut from infinite-support families. */
  double tail_budget;
  /* Relative slack for float-mode log-concavity certificates. */
  double certificate_slack;
  /* Secondary binomial bound with the sharper exponent (1/2) sum (x_i - r)^2 + (sum x_i)^3 / (3 n^2). */
  int proof_tight;
  /* Matroid law normalized over all independent sets, the empty one included. */
  int include_zero;
} rlc_options;

typedef struct rlc_result rlc_result;

/* Fills the defaults: tail_budget 1e-12, certificate_slack 1e-12, flags off. */
RLC_API void rlc_options_init(rlc_options* options);

RLC_API const char* rlc_version(void);
/* Message of the last failing call on this thread; empty when none. */
RLC_API const char* rlc_last_error(void);
RLC_API const char* rlc_status_name(rlc_status status);

/* Options may be NULL for the defaults. */

/* Poisson-binomial law with success probabilities p[0..n-1]. */
RLC_API rlc_status rlc_pb_binomial(const double* p, size_t n, const rlc_options* options, rlc_result** out);
RLC_API rlc_status rlc_pb_poisson(const double* p, size_t n, const rlc_options* options, rlc_result** out);
/* JSON array of summand laws, each an array of masses from 0 or {"offset", "masses", "tail_deficit"}. */
RLC_API rlc_status rlc_sum_geometric(const char* summands_json, const rlc_options* options, rlc_result** out);

RLC_API rlc_status rlc_matroid_uniform(int n, int rank, int m, const rlc_options* options, rlc_result** out);
/* Category i has sizes[i] elements of which at most capacities[i] may be chosen. */
RLC_API rlc_status rlc_matroid_partition(const int* sizes, const int* capacities, size_t categories, int m,
                                         const rlc_options* options, rlc_result** out);
/* JSON list of independent sets (integer arrays) or {"n": int, "sets": [...]}. */
RLC_API rlc_status rlc_matroid_sets(const char* sets_json, int m, const rlc_options* options, rlc_result** out);

RLC_API rlc_status rlc_iv_box(const double* sides, size_t n, int m, const rlc_options* options, rlc_result** out);
RLC_API rlc_status rlc_iv_cube(int n, double side, int m, const rlc_options* options, rlc_result** out);
RLC_API rlc_status rlc_iv_ball(int n, int m, const rlc_options* options, rlc_result** out);
/* JSON list of factors: {"segment": s}, {"box": [..], "scale": t}, {"cube": [n, s], "scale": t} or {"ball": n, "scale": t}. */
RLC_API rlc_status rlc_iv_product(const char* factors_json, const rlc_options* options, rlc_result** out);

/* Severity masses on {0, 1, ...}. */
RLC_API rlc_status rlc_compound_poisson(double lambda, const double* severity, size_t k, const rlc_options* options,
                                        rlc_result** out);
/* Count law as JSON (array of masses from 0 or a distribution object); summands (1 - p) p^j. */
RLC_API rlc_status rlc_compound_geometric(const char* count_json, double p, const rlc_options* options,
                                          rlc_result** out);

/* Gamma(kappa1, lambda1) against Gamma(kappa2, lambda2), rate parameterization.
   Case (i) when case_ii is 0 (z is ignored), otherwise case (ii) at z. */
RLC_API rlc_status rlc_gamma(double kappa1, double lambda1, double kappa2, double lambda2, int case_ii, double z,
                             const rlc_options* options, rlc_result** out);
/* Builtin density name: "exponential", "exp-quadratic" or "exp-cubic". */
RLC_API rlc_status rlc_expapprox(const char* density, const rlc_options* options, rlc_result** out);

/* Randomized dominance sweep; workers 0 uses the hardware concurrency. */
RLC_API rlc_status rlc_verify(const char* suite, uint64_t instances, uint64_t seed, unsigned workers,
                              rlc_result** out);

/* Text of the whole result; release with rlc_string_free. */
RLC_API rlc_status rlc_result_render(const rlc_result* result, rlc_format format, char** text);
RLC_API void rlc_string_free(char* text);
RLC_API void rlc_result_free(rlc_result* result);

RLC_API size_t rlc_result_report_count(const rlc_result* result);
/* Canonical JSON of one report; release with rlc_string_free. */
RLC_API rlc_status rlc_result_report_json(const rlc_result* result, size_t index, char** text);
/* Numeric field of report `index`: "best_bound", "bound_nu_side", "bound_mu_side", "simplified",
   "oracle_lo", "oracle_hi", "param:<name>" or "closed_form:<name>". RLC_INVALID_INPUT when absent. */
RLC_API rlc_status rlc_result_value(const rlc_result* result, size_t index, const char* field, double* value);
/* Boolean field of report `index`: "applicable" or "dominated". */
RLC_API rlc_status rlc_result_flag(const rlc_result* result, size_t index, const char* field, int* value);

#ifdef __cplusplus
}
#endif

#endif
