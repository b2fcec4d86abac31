#ifndef BOUNDARY_PICK_H
#define BOUNDARY_PICK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BpStatus {
  BP_STATUS_OK = 0,
  BP_STATUS_NULL_POINTER = 1,
  /*
   Input failed validation: zero outside the disk, point off the circle, bad JSON.
   */
  BP_STATUS_INVALID_INPUT = 2,
  /*
   A numerical routine failed or contradicted an expected rank.
   */
  BP_STATUS_NUMERICAL = 3,
  BP_STATUS_BUFFER_TOO_SMALL = 4,
  /*
   A panic was caught at the boundary; the message holds its payload.
   */
  BP_STATUS_PANIC = 5,
} BpStatus;

/*
 Finite Blaschke product.
 */
typedef struct BpBlaschke BpBlaschke;

/*
 Outcome of a uniqueness decision.
 */
typedef struct BpVerdict BpVerdict;

typedef struct BpTolerances {
  /*
   Rank cutoff relative to `max(1, lambda_max)`.
   */
  double rank;
  /*
   Positive-definiteness threshold relative to `max(1, lambda_max)`.
   */
  double pd;
} BpTolerances;

typedef struct BpComplex {
  double re;
  double im;
} BpComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL after a success.
 Valid until the next call into the library on this thread.
 */
const char *bp_last_error_message(void);

/*
 Releases a string returned by this library. NULL is ignored.
 */
void bp_string_free(char *s);

struct BpTolerances bp_tolerances_default(void);

/*
 Product with zeros `zeros[0..degree]` and unimodular constant `u`.
 */
enum BpStatus bp_blaschke_new(const struct BpComplex *zeros,
                              size_t degree,
                              struct BpComplex u,
                              struct BpBlaschke **out_handle);

/*
 Product from `{"zeros": [[re, im], ...], "u": [re, im]}`.
 */
enum BpStatus bp_blaschke_from_json(const char *json, struct BpBlaschke **out_handle);

/*
 Releases a product. NULL is ignored.
 */
void bp_blaschke_free(struct BpBlaschke *b);

enum BpStatus bp_blaschke_degree(const struct BpBlaschke *b, size_t *out_degree);

enum BpStatus bp_blaschke_eval(const struct BpBlaschke *b,
                               struct BpComplex z,
                               struct BpComplex *out_value);

/*
 Taylor coefficients `b_0..b_order` at `z0`; needs `order + 1` slots.
 */
enum BpStatus bp_blaschke_taylor_jet(const struct BpBlaschke *b,
                                     struct BpComplex z0,
                                     size_t order,
                                     struct BpComplex *out,
                                     size_t capacity,
                                     size_t *out_len);

/*
 The `degree` solutions of `b(z) = tau` for unimodular `tau`.
 */
enum BpStatus bp_blaschke_level_set(const struct BpBlaschke *b,
                                    struct BpComplex tau,
                                    struct BpComplex *out,
                                    size_t capacity,
                                    size_t *out_len);

/*
 Boundary Schwarz-Pick matrix at `points[0..n]` with orders `orders[0..n]`,
 row-major, side `sum(orders)`, stored in `out_dim`.
 */
enum BpStatus bp_boundary_schwarz_pick(const struct BpBlaschke *b,
                                       const struct BpComplex *points,
                                       const size_t *orders,
                                       size_t n,
                                       struct BpComplex *out,
                                       size_t capacity,
                                       size_t *out_dim);

/*
 Whether contact orders `m[0..n]` force uniqueness for degree `d`:
 1 if so, 0 if not.
 */
enum BpStatus bp_criterion(const size_t *m, size_t n, size_t d, int32_t *out_unique);

/*
 Decides whether `b` is the only product of its degree with contact orders
 `m[0..n]` at `points[0..n]`. `tolerances` may be NULL for the defaults.
 */
enum BpStatus bp_decide(const struct BpBlaschke *b,
                        const struct BpComplex *points,
                        const size_t *m,
                        size_t n,
                        const struct BpTolerances *tolerances,
                        struct BpVerdict **out_verdict);

/*
 Releases a verdict. NULL is ignored.
 */
void bp_verdict_free(struct BpVerdict *v);

/*
 1 for unique, 0 for non-unique.
 */
enum BpStatus bp_verdict_is_unique(const struct BpVerdict *v, int32_t *out_unique);

/*
 Total half order `sum(k_i)`, the side of the Pick matrix.
 */
enum BpStatus bp_verdict_k_total(const struct BpVerdict *v, size_t *out_k_total);

enum BpStatus bp_verdict_degree(const struct BpVerdict *v, size_t *out_degree);

/*
 Certificate round-trip residual; 0 for a uniqueness verdict.
 */
enum BpStatus bp_verdict_residual(const struct BpVerdict *v, double *out_residual);

/*
 Verdict with its certificate as JSON; release with `bp_string_free`.
 */
enum BpStatus bp_verdict_to_json(const struct BpVerdict *v, char **out_json);

/*
 Runs `analyze` on a problem file given as JSON text and returns the same
 schema-versioned report the command line prints with `--format json`.
 */
enum BpStatus bp_analyze_json(const char *problem_json, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOUNDARY_PICK_H */
