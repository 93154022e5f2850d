#include <stddef.h>
#include <string.h>

int store_8(const char *data, size_t len) {
    char dest[24];
    memcpy(dest, data, len);
    return dest[0];
}
