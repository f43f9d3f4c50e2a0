#ifndef BOOLSDR_H
#define BOOLSDR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BsdrMethod {
  BSDR_METHOD_SDR_BOOL = 0,
  BSDR_METHOD_SDR_SPIN = 1,
  BSDR_METHOD_KBE1 = 2,
  BSDR_METHOD_KBE2 = 3,
  BSDR_METHOD_NUCLEAR = 4,
  BSDR_METHOD_LOGDET = 5,
} BsdrMethod;

typedef enum BsdrStatus {
  BSDR_STATUS_OK = 0,
  BSDR_STATUS_NULL_POINTER = 1,
  BSDR_STATUS_INVALID_ARGUMENT = 2,
  BSDR_STATUS_PARSE = 3,
  BSDR_STATUS_ORACLE_TOO_LARGE = 4,
  BSDR_STATUS_SOLVER = 5,
  BSDR_STATUS_BUFFER_TOO_SMALL = 6,
  BSDR_STATUS_NOT_CERTIFIED = 7,
  BSDR_STATUS_PANIC = 8,
} BsdrStatus;

typedef struct BsdrInstance BsdrInstance;

typedef struct BsdrResult BsdrResult;

/**
 * Descent parameters. `known_k < 0` means the cardinality is unknown.
 */
typedef struct BsdrConfig {
  double lambda;
  size_t iterations;
  size_t max_reinits;
  double epsilon;
  uint64_t seed;
  int64_t known_k;
} BsdrConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *bsdr_last_error_message(void);

/**
 * Library version, as a static NUL-terminated string.
 */
const char *bsdr_version(void);

/**
 * The defaults used by the command-line tool.
 */
struct BsdrConfig bsdr_config_default(void);

/**
 * Parses an instance from its JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BsdrStatus bsdr_instance_from_json(const char *json, struct BsdrInstance **out);

/**
 * Number of binary variables, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t bsdr_instance_n(const struct BsdrInstance *inst);

/**
 * # Safety
 * `inst` must be null or a handle not yet freed.
 */
void bsdr_instance_free(struct BsdrInstance *inst);

/**
 * Runs one method. A null `config` means [`bsdr_config_default`].
 *
 * # Safety
 * `inst` must be a live handle, `config` null or valid, `out` valid.
 */
enum BsdrStatus bsdr_solve(const struct BsdrInstance *inst,
                           enum BsdrMethod method,
                           const struct BsdrConfig *config,
                           struct BsdrResult **out);

/**
 * # Safety
 * `res` must be null or a live handle.
 */
bool bsdr_result_certified(const struct BsdrResult *res);

/**
 * Original objective at the rounded candidate; NaN for a null handle.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
double bsdr_result_objective(const struct BsdrResult *res);

/**
 * # Safety
 * `res` must be null or a live handle.
 */
size_t bsdr_result_sdp_iterations(const struct BsdrResult *res);

/**
 * # Safety
 * `res` must be null or a live handle.
 */
size_t bsdr_result_len(const struct BsdrResult *res);

/**
 * Copies the estimate into `buf`: the binary vector when certified, the
 * relaxed candidate otherwise.
 *
 * # Safety
 * `res` must be a live handle and `buf` valid for `len` writes.
 */
enum BsdrStatus bsdr_result_x_hat(const struct BsdrResult *res, double *buf, size_t len);

/**
 * Copies the certified binary solution into `buf`.
 *
 * # Safety
 * `res` must be a live handle and `buf` valid for `len` writes.
 */
enum BsdrStatus bsdr_result_x_binary(const struct BsdrResult *res, uint8_t *buf, size_t len);

/**
 * # Safety
 * `res` must be null or a handle not yet freed.
 */
void bsdr_result_free(struct BsdrResult *res);

/**
 * Exhaustive minimization. Writes the minimizer to `x_opt` (length `n`),
 * and the optimal value and uniqueness flag when those pointers are
 * non-null.
 *
 * # Safety
 * `inst` must be a live handle, `x_opt` valid for `len` writes, and the
 * optional pointers null or valid.
 */
enum BsdrStatus bsdr_oracle(const struct BsdrInstance *inst,
                            uint8_t *x_opt,
                            size_t len,
                            double *value,
                            bool *unique);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOOLSDR_H */
