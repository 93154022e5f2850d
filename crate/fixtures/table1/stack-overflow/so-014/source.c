#include <stddef.h>
#include <string.h>

int store_13(const char *data, size_t len) {
    char path[16];
    memcpy(path, data, len);
    return path[0];
}
