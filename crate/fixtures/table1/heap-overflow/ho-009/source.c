#include <stdlib.h>
#include <string.h>

char *dup_8(const char *src) {
    char *dest = malloc(24);
    if (dest == NULL) {
        return NULL;
    }
    strcpy(dest, src);
    return dest;
}
