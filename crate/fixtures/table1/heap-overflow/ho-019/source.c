#include <stdlib.h>
#include <string.h>

char *dup_18(const char *src) {
    char *out = malloc(8);
    if (out == NULL) {
        return NULL;
    }
    strcpy(out, src);
    return out;
}
