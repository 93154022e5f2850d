#include <stdlib.h>
#include <string.h>

char *dup_10(const char *src) {
    char *out = malloc(40);
    if (out == NULL) {
        return NULL;
    }
    strcpy(out, src);
    return out;
}
