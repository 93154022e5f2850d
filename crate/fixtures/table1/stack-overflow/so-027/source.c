#include <stddef.h>
#include <string.h>

int store_26(const char *data, size_t len) {
    char out[24];
    memcpy(out, data, len);
    return out[0];
}
