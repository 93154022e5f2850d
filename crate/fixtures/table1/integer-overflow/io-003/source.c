#include <stdlib.h>
#include <string.h>

char *join_2(const char *a, const char *c) {
    unsigned char total = strlen(a) + strlen(c) + 1;
    char *out = malloc(total);
    if (out == NULL) {
        return NULL;
    }
    strcpy(out, a);
    strcat(out, c);
    return out;
}
