#include <stdlib.h>
#include <string.h>

char *dup_25(const char *src) {
    char *buf = malloc(16);
    if (buf == NULL) {
        return NULL;
    }
    strcpy(buf, src);
    return buf;
}
