/* C interface to the spdcone library. */

#ifndef SPDCONE_H
#define SPDCONE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call through the C interface.
 */
typedef enum SpdcStatus {
  /**
   * The call succeeded.
   */
  SPDC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SPDC_STATUS_NULL_ARGUMENT = 1,
  /**
   * Two operands disagree in size.
   */
  SPDC_STATUS_DIMENSION = 2,
  /**
   * An operator that must be invertible is singular.
   */
  SPDC_STATUS_SINGULAR = 3,
  /**
   * An input lies outside the domain of the operation.
   */
  SPDC_STATUS_DOMAIN = 4,
  /**
   * An input is degenerate, for example a dependent basis.
   */
  SPDC_STATUS_DEGENERATE = 5,
  /**
   * An iteration failed to reach its tolerance.
   */
  SPDC_STATUS_CONVERGENCE = 6,
  /**
   * An index lies outside its valid range.
   */
  SPDC_STATUS_INDEX = 7,
  /**
   * A malformed request.
   */
  SPDC_STATUS_USAGE = 8,
  /**
   * An internal panic was caught at the boundary.
   */
  SPDC_STATUS_PANIC = 9,
} SpdcStatus;

/**
 * A Hermitian pair, the tangent values of the geometry.
 */
typedef struct SpdcPair SpdcPair;

/**
 * A point of the open cone of positive pairs.
 */
typedef struct SpdcPoint SpdcPoint;

/**
 * A closed triple system, the tangent space of a worked submanifold.
 */
typedef struct SpdcSystem SpdcSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message of the most recent failure on this thread into
 * `buf` as a NUL-terminated string, truncating to `cap` bytes. Returns
 * the full message length in bytes, excluding the terminator; call
 * with a null buffer to size an allocation.
 */
uintptr_t spdc_last_error_message(char *buf, uintptr_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *spdc_version(void);

/**
 * Creates a Hermitian pair from a scalar and a row-major complex
 * matrix of `2 n^2` interleaved doubles. Fails unless the matrix is
 * Hermitian.
 */
enum SpdcStatus spdc_pair_new(uintptr_t n,
                              double scalar,
                              const double *entries,
                              struct SpdcPair **out);

/**
 * Releases a pair handle. A null handle is ignored.
 */
void spdc_pair_free(struct SpdcPair *pair);

/**
 * Matrix dimension of a pair.
 */
enum SpdcStatus spdc_pair_dim(const struct SpdcPair *pair, uintptr_t *out);

/**
 * Copies the scalar coordinate and matrix block of a pair. The entry
 * buffer must hold `2 n^2` doubles.
 */
enum SpdcStatus spdc_pair_value(const struct SpdcPair *pair,
                                double *out_scalar,
                                double *out_entries);

/**
 * Hilbert-Schmidt norm of a pair.
 */
enum SpdcStatus spdc_pair_norm(const struct SpdcPair *pair, double *out);

/**
 * Creates a cone point from a scalar and a Hermitian matrix, checking
 * that the pair is positive.
 */
enum SpdcStatus spdc_point_new(uintptr_t n,
                               double scalar,
                               const double *entries,
                               struct SpdcPoint **out);

/**
 * Releases a point handle. A null handle is ignored.
 */
void spdc_point_free(struct SpdcPoint *point);

/**
 * Matrix dimension of a point.
 */
enum SpdcStatus spdc_point_dim(const struct SpdcPoint *point, uintptr_t *out);

/**
 * Copies the scalar coordinate and matrix block of a point. The entry
 * buffer must hold `2 n^2` doubles.
 */
enum SpdcStatus spdc_point_value(const struct SpdcPoint *point,
                                 double *out_scalar,
                                 double *out_entries);

/**
 * Exponential of a pair, always a cone point.
 */
enum SpdcStatus spdc_point_exp(const struct SpdcPair *pair, struct SpdcPoint **out);

/**
 * Logarithm of a point, always a Hermitian pair.
 */
enum SpdcStatus spdc_point_log(const struct SpdcPoint *point, struct SpdcPair **out);

/**
 * Geodesic distance between two points.
 */
enum SpdcStatus spdc_distance(const struct SpdcPoint *a, const struct SpdcPoint *b, double *out);

/**
 * Riemannian inner product of two tangent pairs at a point.
 */
enum SpdcStatus spdc_metric(const struct SpdcPoint *p,
                            const struct SpdcPair *x,
                            const struct SpdcPair *y,
                            double *out);

/**
 * Riemannian exponential of a tangent pair at a point.
 */
enum SpdcStatus spdc_exp(const struct SpdcPoint *p,
                         const struct SpdcPair *v,
                         struct SpdcPoint **out);

/**
 * Riemannian logarithm of `q` at `p`.
 */
enum SpdcStatus spdc_log(const struct SpdcPoint *p,
                         const struct SpdcPoint *q,
                         struct SpdcPair **out);

/**
 * Point of the geodesic from `a` to `b` at parameter `t`.
 */
enum SpdcStatus spdc_geodesic(const struct SpdcPoint *a,
                              const struct SpdcPoint *b,
                              double t,
                              struct SpdcPoint **out);

/**
 * Parallel transport of `w` along the geodesic from `p` to `q`.
 */
enum SpdcStatus spdc_transport(const struct SpdcPoint *p,
                               const struct SpdcPoint *q,
                               const struct SpdcPair *w,
                               struct SpdcPair **out);

/**
 * Sectional curvature of the plane spanned by `x` and `y` at `p`.
 */
enum SpdcStatus spdc_sectional(const struct SpdcPoint *p,
                               const struct SpdcPair *x,
                               const struct SpdcPair *y,
                               double *out);

/**
 * Geodesic symmetry of `q` through `p`.
 */
enum SpdcStatus spdc_symmetry(const struct SpdcPoint *p,
                              const struct SpdcPoint *q,
                              struct SpdcPoint **out);

/**
 * Diagonal pairs at dimension `n`.
 */
enum SpdcStatus spdc_system_diagonal(uintptr_t n, struct SpdcSystem **out);

/**
 * Scalar multiples of the unit at dimension `n`.
 */
enum SpdcStatus spdc_system_scalar(uintptr_t n, struct SpdcSystem **out);

/**
 * Pairs supported on the top-left `k` by `k` corner at dimension `n`.
 */
enum SpdcStatus spdc_system_block(uintptr_t n, uintptr_t k, struct SpdcSystem **out);

/**
 * Hermitian pairs commuting with the given pair.
 */
enum SpdcStatus spdc_system_commutant(const struct SpdcPair *y, struct SpdcSystem **out);

/**
 * The unital algebra generated by one Hermitian pair.
 */
enum SpdcStatus spdc_system_polynomial(const struct SpdcPair *a, struct SpdcSystem **out);

/**
 * Span of the given pairs, which must be independent and closed under
 * double brackets.
 */
enum SpdcStatus spdc_system_custom(const struct SpdcPair *const *basis,
                                   uintptr_t len,
                                   struct SpdcSystem **out);

/**
 * Releases a system handle. A null handle is ignored.
 */
void spdc_system_free(struct SpdcSystem *sys);

/**
 * Linear dimension of a system.
 */
enum SpdcStatus spdc_system_dim(const struct SpdcSystem *sys, uintptr_t *out);

/**
 * Matrix dimension of the ambient pairs of a system.
 */
enum SpdcStatus spdc_system_ambient_dim(const struct SpdcSystem *sys, uintptr_t *out);

/**
 * Decides whether the span of the given pairs is closed under double
 * brackets at tolerance `tol`; also reports the worst residual.
 */
enum SpdcStatus spdc_triple_check(const struct SpdcPair *const *basis,
                                  uintptr_t len,
                                  double tol,
                                  bool *out_closed,
                                  double *out_residual);

/**
 * Nearest point of the exponential image of `sys` to `p`. The foot is
 * required; the normal vector, iteration count and final residual are
 * copied only through non-null pointers.
 */
enum SpdcStatus spdc_project(const struct SpdcSystem *sys,
                             const struct SpdcPoint *p,
                             double tol,
                             uintptr_t max_iter,
                             struct SpdcPoint **out_foot,
                             struct SpdcPair **out_normal,
                             uintptr_t *out_iterations,
                             double *out_residual);

/**
 * Two sided splitting `e^a = e^x e^v e^x` relative to a system: `x`
 * lies in the span and `v` is orthogonal to it.
 */
enum SpdcStatus spdc_decompose_mvm(const struct SpdcSystem *sys,
                                   const struct SpdcPair *a,
                                   struct SpdcPair **out_x,
                                   struct SpdcPair **out_v);

/**
 * Diagonal splitting `lambda + a = D e^w D` of a shifted Hermitian
 * matrix. Takes and returns raw matrices of `2 n^2` interleaved
 * doubles; `out_d` receives the positive diagonal factor and `out_w`
 * the zero-diagonal exponent.
 */
enum SpdcStatus spdc_diag_decompose(uintptr_t n,
                                    const double *entries,
                                    double lambda,
                                    double *out_d,
                                    double *out_w);

/**
 * Scale coordinate of a point under the scalar foliation.
 */
enum SpdcStatus spdc_leaf_of(const struct SpdcPoint *point, double *out);

/**
 * Nearest point of the leaf with scale `lambda`.
 */
enum SpdcStatus spdc_leaf_project(const struct SpdcPoint *point,
                                  double lambda,
                                  struct SpdcPoint **out);

/**
 * Splits a point into its unit-leaf part and its scale.
 */
enum SpdcStatus spdc_split(const struct SpdcPoint *point,
                           struct SpdcPoint **out_leaf,
                           double *out_lambda);

/**
 * Rebuilds a point from its unit-leaf part and scale.
 */
enum SpdcStatus spdc_unsplit(const struct SpdcPoint *leaf, double lambda, struct SpdcPoint **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPDCONE_H */
