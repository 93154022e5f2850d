#include <stddef.h>
#include <string.h>

int store_0(const char *data, size_t len) {
    char dest[8];
    memcpy(dest, data, len);
    return dest[0];
}
