#ifndef BAYES_AGGREGATE_H
#define BAYES_AGGREGATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `BA_STATUS_OK` is zero; everything else is an error.
 */
typedef enum BaStatus {
  BA_STATUS_OK = 0,
  BA_STATUS_INVALID_ARGUMENT = 1,
  BA_STATUS_DOMAIN = 2,
  BA_STATUS_DIMENSION_MISMATCH = 3,
  BA_STATUS_NON_FINITE = 4,
  BA_STATUS_NUMERIC_FAILURE = 5,
  BA_STATUS_CHAIN_ABORT = 6,
  BA_STATUS_INSUFFICIENT_DRAWS = 7,
  BA_STATUS_IO = 8,
  BA_STATUS_PARSE = 9,
  BA_STATUS_NULL_POINTER = 10,
  BA_STATUS_PANIC = 11,
} BaStatus;

/**
 * Which aggregator to run.
 */
typedef enum BaMode {
  BA_MODE_CONVEX = 0,
  BA_MODE_LINEAR = 1,
} BaMode;

/**
 * Posterior draws and point estimate of one chain.
 */
typedef struct BaPosterior BaPosterior;

/**
 * Monte Carlo concentration probabilities of the Dirichlet prior.
 */
typedef struct BaConcentration {
  double p_ball;
  double se_ball;
  double p_tail;
  double se_tail;
} BaConcentration;

/**
 * Chain settings; other hyperparameters keep their defaults.
 */
typedef struct BaChainConfig {
  enum BaMode mode;
  size_t n_iter;
  size_t burn_in;
  double alpha;
  double gamma;
} BaChainConfig;

/**
 * Post-burn-in acceptance rates. `scale` and `signs` are set to -1 for the convex
 * chain.
 */
typedef struct BaAcceptance {
  double weights;
  double scale;
  double signs;
} BaAcceptance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none failed. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ba_last_error_message(void);

/**
 * Draw `λ ~ Diri(α/M^γ, …)` into `out[0..m]`.
 *
 * # Safety
 * `out` must point to `m` writable doubles.
 */
enum BaStatus ba_sample_dirichlet(double alpha, double gamma, size_t m, uint64_t seed, double *out);

/**
 * Estimate ball and tail probabilities with `λ*` uniform on the first `s`
 * coordinates.
 *
 * # Safety
 * `out` must point to a writable `BaConcentration`.
 */
enum BaStatus ba_estimate_concentration(size_t m,
                                        double alpha,
                                        double gamma,
                                        size_t s,
                                        double eps,
                                        size_t draws,
                                        uint64_t seed,
                                        struct BaConcentration *out);

/**
 * `α = 1, γ = 2`, 2000 iterations with 1000 burn-in.
 */
struct BaChainConfig ba_chain_config_default(enum BaMode mode);

/**
 * Run a chain on the `n × m` prediction matrix `f` (row-major) and response `y`.
 * On success `*out` receives a new handle.
 *
 * # Safety
 * `y` must point to `n` doubles, `f` to `n·m` doubles, `config` and `out` must be
 * valid.
 */
enum BaStatus ba_run_chain(const double *y,
                           const double *f,
                           size_t n,
                           size_t m,
                           const struct BaChainConfig *config,
                           uint64_t seed,
                           struct BaPosterior **out);

/**
 * Release a handle. Null is accepted.
 *
 * # Safety
 * `handle` must come from `ba_run_chain` and not be used afterwards.
 */
void ba_posterior_free(struct BaPosterior *handle);

/**
 * Number of stored draws and coefficients per draw.
 *
 * # Safety
 * `handle` must be valid; `draws` and `dim` may be null.
 */
enum BaStatus ba_posterior_shape(const struct BaPosterior *handle, size_t *draws, size_t *dim);

/**
 * Posterior mean of `λ` (convex) or posterior median of `θ` (linear), `len`
 * doubles.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum BaStatus ba_posterior_estimate(const struct BaPosterior *handle, double *out, size_t len);

/**
 * Copy all draws row-major (`draws × dim`) into `out`.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum BaStatus ba_posterior_draws(const struct BaPosterior *handle, double *out, size_t len);

/**
 * # Safety
 * `handle` and `out` must be valid.
 */
enum BaStatus ba_posterior_acceptance(const struct BaPosterior *handle, struct BaAcceptance *out);

/**
 * Mode the handle was produced with.
 *
 * # Safety
 * `handle` and `out` must be valid.
 */
enum BaStatus ba_posterior_mode(const struct BaPosterior *handle, enum BaMode *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BAYES_AGGREGATE_H */
