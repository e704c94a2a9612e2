#include <stdio.h>
#include "twoseg.h"

int main(void) {
    TwosegDocument *doc = NULL;
    if (twoseg_document_example("cyclic-group", 2, 4, &doc) != TWOSEG_STATUS_OK) {
        fprintf(stderr, "example: %s\n", twoseg_last_error());
        return 2;
    }
    char *report = NULL;
    TwosegStatus status = twoseg_check(doc, 0, &report);
    printf("status %d\n%s\n", (int)status, report);
    twoseg_string_free(report);
    twoseg_document_free(doc);
    return (int)status;
}
