#include <stdlib.h>
#include <string.h>

char *dup_0(const char *src) {
    char *dest = malloc(8);
    if (dest == NULL) {
        return NULL;
    }
    strcpy(dest, src);
    return dest;
}
