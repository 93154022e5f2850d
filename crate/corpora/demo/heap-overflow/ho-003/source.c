#include <stdlib.h>
#include <string.h>

char *copy_record(const char *rec, size_t len) {
    char *buf = malloc(16);
    if (buf == NULL) {
        return NULL;
    }
    memcpy(buf, rec, len);
    return buf;
}
