#include <stddef.h>
#include <string.h>

int store_10(const char *data, size_t len) {
    char out[40];
    memcpy(out, data, len);
    return out[0];
}
