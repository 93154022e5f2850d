#include <stdlib.h>
#include <string.h>

char *dup_16(const char *src) {
    char *dest = malloc(40);
    if (dest == NULL) {
        return NULL;
    }
    strcpy(dest, src);
    return dest;
}
