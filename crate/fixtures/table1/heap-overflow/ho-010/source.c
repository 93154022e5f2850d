#include <stdlib.h>
#include <string.h>

char *dup_9(const char *src) {
    char *buf = malloc(32);
    if (buf == NULL) {
        return NULL;
    }
    strcpy(buf, src);
    return buf;
}
