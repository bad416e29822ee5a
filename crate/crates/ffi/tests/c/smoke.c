#include <math.h>
#include <stdio.h>
#include "tangleforge.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "line %d: %s\n", __LINE__, #cond); return 1; } } while (0)

int main(void) {
    TfPureState *ghz = NULL;
    double v = -1.0;
    CHECK(tf_pure_named("ghz", &ghz) == TF_STATUS_OK);
    CHECK(tf_pure_n_qubits(ghz) == 3);
    CHECK(tf_three_tangle(ghz, &v) == TF_STATUS_OK);
    CHECK(fabs(v - 1.0) < 1e-12);

    TfDensity *pi = NULL;
    CHECK(tf_density_named("pi-ghz", &pi) == TF_STATUS_OK);
    CHECK(tf_density_dim(pi) == 8);
    CHECK(tf_pi_tangle(pi, &v) == TF_STATUS_OK);
    CHECK(fabs(v - 1.0 / 9.0) < 1e-10);

    TfPureState *bad = NULL;
    double zeros[8] = {0};
    CHECK(tf_pure_from_amplitudes(zeros, NULL, 8, true, &bad) == TF_STATUS_INVALID_STATE);
    char msg[128];
    CHECK(tf_last_error_message(msg, sizeof msg) > 0);

    tf_density_free(pi);
    tf_pure_free(ghz);
    puts("ok");
    return 0;
}
