#ifndef SBP_FFI_H
#define SBP_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Boundary condition on one side of a SAT discretization.
typedef enum SbpBoundary {
  SBP_BOUNDARY_DIRICHLET = 0,
  SBP_BOUNDARY_NEUMANN = 1,
} SbpBoundary;

// Which generalized inverse `sbp_pseudoinverse_solve` applies.
typedef enum SbpNeumannMethod {
  SBP_NEUMANN_METHOD_MOORE_PENROSE = 0,
  SBP_NEUMANN_METHOD_FILTERED = 1,
} SbpNeumannMethod;

// Result code of every fallible call.
typedef enum SbpStatus {
  SBP_STATUS_OK = 0,
  SBP_STATUS_NULL_POINTER = 1,
  SBP_STATUS_INVALID_ARGUMENT = 2,
  SBP_STATUS_BUFFER_TOO_SMALL = 3,
  SBP_STATUS_SINGULAR_MATRIX = 4,
  SBP_STATUS_NO_CONVERGENCE = 5,
  SBP_STATUS_NO_CROSSING = 6,
  SBP_STATUS_UNSTABLE = 7,
  SBP_STATUS_NUMERICAL_FAILURE = 8,
  SBP_STATUS_PANIC = 9,
} SbpStatus;

// Operator with SAT boundary terms.
typedef struct SbpDiscretization SbpDiscretization;

// Second-derivative operator.
typedef struct SbpOperator SbpOperator;

// `A⁺`, `G2` and the filtered inverse of an operator.
typedef struct SbpPseudoinverse SbpPseudoinverse;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never null.
const char *sbp_status_message(enum SbpStatus status);

// Message of the last failed call on this thread, or null. Release with
// `sbp_string_free`.
char *sbp_last_error_message(void);

// # Safety
// `s` must come from `sbp_last_error_message` or be null.
void sbp_string_free(char *s);

// Builds D2 of interior order 2, 4 or 6 on `n` intervals. `alpha` is
// required for order 6 and ignored otherwise.
//
// # Safety
// `out` must be a valid pointer.
enum SbpStatus sbp_operator_new(uint32_t order, size_t n, double alpha, struct SbpOperator **out);

// # Safety
// `op` must come from `sbp_operator_new` or be null.
void sbp_operator_free(struct SbpOperator *op);

// Number of grid points, `n + 1`. Zero for a null handle.
//
// # Safety
// `op` must be a live handle or null.
size_t sbp_operator_len(const struct SbpOperator *op);

// Copies the diagonal of H into `out[0..len]`.
//
// # Safety
// `op` must be a live handle and `out` must hold `len` doubles.
enum SbpStatus sbp_operator_norm(const struct SbpOperator *op, double *out, size_t len);

// Copies D2 row-major into `out[0..len]`; `len` must be at least `(n + 1)²`.
//
// # Safety
// `op` must be a live handle and `out` must hold `len` doubles.
enum SbpStatus sbp_operator_d2(const struct SbpOperator *op, double *out, size_t len);

// Copies A row-major into `out[0..len]`.
//
// # Safety
// `op` must be a live handle and `out` must hold `len` doubles.
enum SbpStatus sbp_operator_a(const struct SbpOperator *op, double *out, size_t len);

// Borrowing capacity γ of the operator.
//
// # Safety
// `op` must be a live handle and `gamma` a valid pointer.
enum SbpStatus sbp_borrowing_capacity(const struct SbpOperator *op, double *gamma);

// Both roots of the α* eigenproblem for `n` intervals.
//
// # Safety
// `low` and `high` must be valid pointers.
enum SbpStatus sbp_alpha_star(size_t n, double *low, double *high);

// # Safety
// `op` must be a live handle and `out` a valid pointer.
enum SbpStatus sbp_pseudoinverse_new(const struct SbpOperator *op, struct SbpPseudoinverse **out);

// # Safety
// `p` must come from `sbp_pseudoinverse_new` or be null.
void sbp_pseudoinverse_free(struct SbpPseudoinverse *p);

// Mean-zero solution of `A v = b`. `b` and `out` hold `len = n + 1` values.
//
// # Safety
// `p` must be a live handle; `b` and `out` must hold `len` doubles.
enum SbpStatus sbp_pseudoinverse_solve(const struct SbpPseudoinverse *p,
                                       enum SbpNeumannMethod method,
                                       const double *b,
                                       double *out,
                                       size_t len);

// SAT discretization of `op` with penalty factor `phi` (> 1 when a side is
// Dirichlet). The operator is copied; it may be freed afterwards.
//
// # Safety
// `op` must be a live handle and `out` a valid pointer.
enum SbpStatus sbp_discretization_new(const struct SbpOperator *op,
                                      enum SbpBoundary left,
                                      enum SbpBoundary right,
                                      double phi,
                                      struct SbpDiscretization **out);

// # Safety
// `d` must come from `sbp_discretization_new` or be null.
void sbp_discretization_free(struct SbpDiscretization *d);

// Copies the SAT-modified operator row-major into `out[0..len]`.
//
// # Safety
// `d` must be a live handle and `out` must hold `len` doubles.
enum SbpStatus sbp_discretization_matrix(const struct SbpDiscretization *d,
                                         double *out,
                                         size_t len);

// Spectral radius of the SAT-modified operator.
//
// # Safety
// `d` must be a live handle and `rho` a valid pointer.
enum SbpStatus sbp_discretization_spectral_radius(const struct SbpDiscretization *d, double *rho);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SBP_FFI_H */
