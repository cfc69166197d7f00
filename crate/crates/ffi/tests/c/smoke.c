#include <math.h>
#include <stdio.h>
#include <string.h>

#include "abc_contrast.h"

static int failures = 0;

static void check(int ok, const char *what) {
    if (!ok) {
        fprintf(stderr, "FAIL %s (last error: %s)\n", what, abc_last_error());
        failures++;
    }
}

int main(void) {
    AbcPacket1D *p = NULL;
    AbcProbability st, abc;
    AbcComplex beta = {0.0, 5.0};
    AbcComplex bad = {0.0, -1.0};

    check(fabs(abc_erfc(0.0) - 1.0) < 1e-15, "erfc(0)");
    check(abc_packet1d_gaussian(5.0, &p) == ABC_STATUS_OK, "gaussian");
    check(abc_p_st(p, NULL, &st) == ABC_STATUS_OK, "p_st");
    check(fabs(st.value - (1.0 - 0.5 * abc_erfc(5.0))) < 1e-9, "p_st value");
    check(abc_p_abc_time(p, beta, 10.0, NULL, &abc) == ABC_STATUS_OK, "p_abc");
    check(abc.value > 0.9 && abc.value <= 1.0, "p_abc range");
    check(abc_p_abc_time(p, bad, 10.0, NULL, &abc) == ABC_STATUS_UNPHYSICAL, "unphysical beta");
    check(strlen(abc_last_error()) > 0, "error message");
    check(abc_p_st(NULL, NULL, &st) == ABC_STATUS_NULL_POINTER, "null packet");
    abc_packet1d_free(p);
    abc_packet1d_free(NULL);

    if (failures == 0) {
        printf("c smoke ok (version %s)\n", abc_version());
    }
    return failures == 0 ? 0 : 1;
}
