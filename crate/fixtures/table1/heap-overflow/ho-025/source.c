#include <stdlib.h>
#include <string.h>

char *dup_24(const char *src) {
    char *dest = malloc(8);
    if (dest == NULL) {
        return NULL;
    }
    strcpy(dest, src);
    return dest;
}
