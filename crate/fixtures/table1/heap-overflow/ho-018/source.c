#include <stdlib.h>
#include <string.h>

char *dup_17(const char *src) {
    char *buf = malloc(48);
    if (buf == NULL) {
        return NULL;
    }
    strcpy(buf, src);
    return buf;
}
