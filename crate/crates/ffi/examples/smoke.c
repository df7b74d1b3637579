#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "sbp_ffi.h"

int main(void) {
    double lo, hi, gamma, rho;
    SbpOperator *op = NULL;
    SbpDiscretization *disc = NULL;

    if (sbp_alpha_star(24, &lo, &hi) != SBP_STATUS_OK) return 1;
    if (sbp_operator_new(6, 24, 490.0, &op) != SBP_STATUS_OK) return 2;
    if (sbp_borrowing_capacity(op, &gamma) != SBP_STATUS_OK) return 3;
    if (fabs(gamma - 0.187871502626966) > 1e-9) return 4;
    if (sbp_discretization_new(op, SBP_BOUNDARY_DIRICHLET, SBP_BOUNDARY_NEUMANN, 2.0, &disc) != SBP_STATUS_OK) return 5;
    if (sbp_discretization_spectral_radius(disc, &rho) != SBP_STATUS_OK) return 6;

    SbpOperator *bad = NULL;
    if (sbp_operator_new(6, 24, NAN, &bad) != SBP_STATUS_INVALID_ARGUMENT) return 7;
    char *msg = sbp_last_error_message();
    if (msg == NULL) return 8;

    printf("alpha* %.13f gamma %.15f rho %.6e\n%s\n", lo, gamma, rho, msg);
    sbp_string_free(msg);
    sbp_discretization_free(disc);
    sbp_operator_free(op);
    return 0;
}
