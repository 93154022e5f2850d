#include <stddef.h>
#include <string.h>

int store_16(const char *data, size_t len) {
    char dest[40];
    memcpy(dest, data, len);
    return dest[0];
}
