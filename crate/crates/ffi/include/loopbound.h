#ifndef LOOPBOUND_H
#define LOOPBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  LB_BRANCH_REAL = 0,
  LB_BRANCH_IMAGINARY = 1,
} LbBranch;

typedef enum {
  LB_STATUS_OK = 0,
  LB_STATUS_NULL_POINTER = 1,
  /**
   * A parameter hits a vanishing denominator.
   */
  LB_STATUS_DEGENERATE = 2,
  LB_STATUS_INVALID_ARGUMENT = 3,
  LB_STATUS_RANK_DEFICIENT = 4,
  LB_STATUS_FAILED = 5,
  LB_STATUS_PANIC = 6,
} LbStatus;

typedef enum {
  LB_SYMBOL_T = 0,
  LB_SYMBOL_U1 = 1,
  LB_SYMBOL_U2 = 2,
  LB_SYMBOL_V = 3,
  LB_SYMBOL_W1 = 4,
  LB_SYMBOL_W2 = 5,
  LB_SYMBOL_BETA1 = 6,
  LB_SYMBOL_BETA2 = 7,
  LB_SYMBOL_BETA3 = 8,
  LB_SYMBOL_BETA4 = 9,
} LbSymbol;

/**
 * Opaque C₂⁽¹⁾ parameter point.
 */
typedef struct LbC2Params LbC2Params;

/**
 * Opaque O(n) parameter point.
 */
typedef struct LbOnParams LbOnParams;

/**
 * Opaque weight set.
 */
typedef struct LbWeights LbWeights;

/**
 * Derived loop fugacities of a parameter point.
 */
typedef struct {
  double n;
  double n1;
  double n2;
  double n3;
  double rho;
} LbFugacities;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *lb_version(void);

/**
 * Short description of a status code, a static NUL-terminated string.
 */
const char *lb_status_message(LbStatus status);

/**
 * # Safety
 * `out` must be valid for a pointer write.
 */
LbStatus lb_on_params_new(double lambda, double lambda1, double x, double n2, LbOnParams **out);

/**
 * # Safety
 * `p` must come from [`lb_on_params_new`] and not be used afterwards.
 */
void lb_on_params_free(LbOnParams *p);

/**
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
LbStatus lb_on_params_fugacities(const LbOnParams *p, LbFugacities *out);

/**
 * # Safety
 * `out` must be valid for a pointer write.
 */
LbStatus lb_c2_params_new(double lambda, double lambda1, double x, double n1, LbC2Params **out);

/**
 * # Safety
 * `p` must come from [`lb_c2_params_new`] and not be used afterwards.
 */
void lb_c2_params_free(LbC2Params *p);

/**
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
LbStatus lb_c2_params_fugacities(const LbC2Params *p, LbFugacities *out);

/**
 * Bulk O(n) weights (t, u1, u2, v, w1, w2).
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
LbStatus lb_weights_on_bulk(double lambda, double x, LbWeights **out);

/**
 * Non-diagonal O(n) boundary weights (β1, β2, β3).
 *
 * # Safety
 * `p` must be a live handle; `out` valid for a pointer write.
 */
LbStatus lb_weights_on_boundary(const LbOnParams *p, LbBranch branch, LbWeights **out);

/**
 * C₂⁽¹⁾ bulk weights.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for a pointer write.
 */
LbStatus lb_weights_c2_bulk(const LbC2Params *p, LbWeights **out);

/**
 * C₂⁽¹⁾ boundary weights (β1..β4).
 *
 * # Safety
 * `p` must be a live handle; `out` valid for a pointer write.
 */
LbStatus lb_weights_c2_boundary(const LbC2Params *p, LbBranch branch, LbWeights **out);

/**
 * One-parameter family of generalized O(n) boundary weights (β1..β4).
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
LbStatus lb_weights_generalized(double lambda, double x, double k, double n1, LbWeights **out);

/**
 * # Safety
 * `w` must come from an `lb_weights_*` constructor and not be used afterwards.
 */
void lb_weights_free(LbWeights *w);

/**
 * Number of entries; 0 for a null handle.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
size_t lb_weights_len(const LbWeights *w);

/**
 * Entry `index` in symbol order.
 *
 * # Safety
 * `w` must be a live handle; `symbol` and `value` valid for writes.
 */
LbStatus lb_weights_get(const LbWeights *w, size_t index, LbSymbol *symbol, double *value);

/**
 * Largest relative residual of the three O(n) boundary forms of `branch`.
 *
 * # Safety
 * `p` and `w` must be live handles; `out` valid for writes.
 */
LbStatus lb_on_boundary_residual(const LbOnParams *p,
                                 LbBranch branch,
                                 const LbWeights *w,
                                 double *out);

/**
 * Largest relative residual of the five C₂⁽¹⁾ boundary forms of `branch`.
 *
 * # Safety
 * `p` and `w` must be live handles; `out` valid for writes.
 */
LbStatus lb_c2_boundary_residual(const LbC2Params *p,
                                 LbBranch branch,
                                 const LbWeights *w,
                                 double *out);

/**
 * Largest reflection-equation class residual with the closed-form O(n)
 * weights at spectral parameters `x` (from `p`) and `y`.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
LbStatus lb_on_reflection_residual(const LbOnParams *p, double y, LbBranch branch, double *out);

/**
 * As [`lb_on_reflection_residual`] for C₂⁽¹⁾.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
LbStatus lb_c2_reflection_residual(const LbC2Params *p, double y, LbBranch branch, double *out);

/**
 * As [`lb_on_reflection_residual`] for the generalized model with equal
 * boundary fugacities `n1`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
LbStatus lb_generalized_reflection_residual(double lambda,
                                            double x,
                                            double k,
                                            double n1,
                                            double y,
                                            double *out);

/**
 * max|aᵢbⱼ − aⱼbᵢ| / (max|a|·max|b|) over two arrays of length `len`.
 *
 * # Safety
 * `a` and `b` must point to `len` readable doubles; `out` valid for writes.
 */
LbStatus lb_projective_deviation(const double *a, const double *b, size_t len, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LOOPBOUND_H */
