#include <stddef.h>
#include <string.h>

int store_18(const char *data, size_t len) {
    char out[8];
    memcpy(out, data, len);
    return out[0];
}
