#include <stdlib.h>
#include <string.h>

char *dup_2(const char *src) {
    char *out = malloc(24);
    if (out == NULL) {
        return NULL;
    }
    strcpy(out, src);
    return out;
}
