/* Build: cc -Iinclude examples/smoke.c ../../target/release/libvarisk_ffi.a -lpthread -ldl -lm */
#include <stdio.h>

#include "varisk.h"

static int check(VariskStatus status) {
    if (status != VARISK_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", varisk_status_name(status), varisk_last_error_message());
        return 1;
    }
    return 0;
}

int main(void) {
    VariskDistribution *x = NULL;
    VariskReport report;
    double roots[4];
    size_t count = 0;
    double var = 0.0;

    if (check(varisk_distribution_parse("exp:1", &x))) return 1;
    if (check(varisk_crossover(x, x, NULL, roots, 4, &count))) return 1;
    printf("crossover: %.10f (%zu root)\n", roots[0], count);

    if (check(varisk_independent_var(x, x, 0.95, NULL, &var))) return 1;
    printf("VaR_0.95(X+Y) = %.12f\n", var);

    if (check(varisk_compare(x, x, VARISK_DEPENDENCE_INDEPENDENT, 0.5, NULL, 1e-9, &report))) return 1;
    printf("alpha=0.5 verdict=%d delta=%.6f\n", (int)report.verdict, report.delta);

    if (varisk_quantile(x, 1.5, &var) != VARISK_STATUS_DOMAIN) return 1;
    printf("expected failure: %s\n", varisk_last_error_message());

    varisk_distribution_free(x);
    return 0;
}
