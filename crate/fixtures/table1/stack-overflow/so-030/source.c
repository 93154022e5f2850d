#include <stddef.h>
#include <string.h>

int store_29(const char *data, size_t len) {
    char path[48];
    memcpy(path, data, len);
    return path[0];
}
