#include <stdio.h>
#include <string.h>

#include "umm.h"

int main(void) {
    UmmContext *ctx = NULL;
    if (umm_context_new(1, "{\"kind\":\"spectra\",\"generators\":[\"x\"],\"values\":[[1,3]]}", &ctx) != UMM_STATUS_OK) {
        fprintf(stderr, "context: %s\n", umm_last_error());
        return 1;
    }
    UmmPolynomial *p = NULL;
    if (umm_polynomial_parse(ctx, "x u1 x u1^-1", &p) != UMM_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", umm_last_error());
        return 1;
    }
    char *json = NULL;
    if (umm_master_field_json(ctx, p, NULL, 0, &json) != UMM_STATUS_OK) {
        fprintf(stderr, "master field: %s\n", umm_last_error());
        return 1;
    }
    printf("%s\n", json);
    umm_string_free(json);
    umm_polynomial_free(p);

    UmmPolynomial *bad = NULL;
    int status = umm_polynomial_parse(ctx, "u7", &bad);
    umm_context_free(ctx);
    if (status != UMM_STATUS_PARSE || strstr(umm_last_error(), "u7") == NULL) {
        return 1;
    }
    size_t alpha[] = {2, 1}, beta[] = {3};
    uint64_t count = 0;
    if (umm_hurwitz_count(2, alpha, 2, beta, 1, &count) != UMM_STATUS_OK || count != 126) {
        return 1;
    }
    return 0;
}
