#ifndef NESS_H
#define NESS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define NESS_FLAG_STEP_SENSITIVE 1

#define NESS_FLAG_SEMI_CLASSICAL_EPR 2

#define NESS_FLAG_NEGATIVE_EPR 4

#define NESS_FLAG_DEGENERATE_ROTATION 8

typedef enum NessStatus {
  NESS_STATUS_OK = 0,
  NESS_STATUS_NULL_POINTER = 1,
  NESS_STATUS_INVALID_PARAMETER = 2,
  NESS_STATUS_DOMAIN = 3,
  NESS_STATUS_SOLVER = 4,
  NESS_STATUS_NOT_X_FORM = 5,
  NESS_STATUS_STEP = 6,
  NESS_STATUS_RANK_CHANGE = 7,
  NESS_STATUS_OPTIMIZER = 8,
  NESS_STATUS_PANIC = 9,
} NessStatus;

/**
 * Opaque parameter point.
 */
typedef struct NessModel NessModel;

typedef struct NessSystem {
  double omega1;
  double omega2;
  double delta;
  double gamma1;
  double gamma2;
} NessSystem;

typedef struct NessBaths {
  double t1;
  double t2;
  double mu1;
  double mu2;
} NessBaths;

typedef struct NessQfi {
  double f_total;
  double f_e;
  double f_n;
  double step;
  uint32_t flags;
} NessQfi;

/**
 * Everything computed at one point. Correlations are in the energy basis.
 */
typedef struct NessReport {
  double residual;
  double populations[4];
  double rho23_re;
  double rho23_im;
  struct NessQfi qfi;
  double coherence;
  double linear_entropy;
  double concurrence;
  double qmi;
  double classical_corr;
  double discord;
  double i1;
  double i2;
  double j1;
  double j2;
  double epr;
  uint32_t flags;
} NessReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a model. On success `*out` owns a handle to release with
 * `ness_model_free`; on failure it is set to NULL.
 *
 * # Safety
 * `system` and `baths` must be NULL or valid for reads; `out` must be NULL or
 * valid for writes.
 */
enum NessStatus ness_model_new(const struct NessSystem *system,
                               const struct NessBaths *baths,
                               struct NessModel **out);

/**
 * Releases a model. NULL is ignored.
 *
 * # Safety
 * `model` must be NULL or a handle from `ness_model_new` not yet freed.
 */
void ness_model_free(struct NessModel *model);

/**
 * Replaces the tunneling rate, keeping everything else.
 *
 * # Safety
 * `model` must be NULL or a live handle.
 */
enum NessStatus ness_model_set_delta(struct NessModel *model, double delta);

/**
 * Writes the steady state: `re[16]` and `im[16]`, row-major.
 *
 * # Safety
 * `model` must be NULL or a live handle; `re` and `im` must be NULL or valid
 * for 16 writes each.
 */
enum NessStatus ness_model_steady_state(const struct NessModel *model,
                                        double *re,
                                        double *im,
                                        double *residual);

/**
 * Spectral QFI with respect to Δ. A non-positive `step` selects the default.
 *
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or valid for writes.
 */
enum NessStatus ness_model_qfi(const struct NessModel *model, double step, struct NessQfi *out);

/**
 * Fidelity-based QFI cross-check. A non-positive `step` selects the default.
 *
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or valid for writes.
 */
enum NessStatus ness_model_qfi_fidelity(const struct NessModel *model, double step, double *out);

/**
 * Steady state, QFI, correlations and currents in one call. `seed` jitters
 * the discord grid when `use_seed` is nonzero.
 *
 * # Safety
 * `model` must be NULL or a live handle; `out` must be NULL or valid for writes.
 */
enum NessStatus ness_model_evaluate(const struct NessModel *model,
                                    int32_t use_seed,
                                    uint64_t seed,
                                    struct NessReport *out);

/**
 * Message of the last failed call on this thread, or NULL after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ness_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ness_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NESS_H */
