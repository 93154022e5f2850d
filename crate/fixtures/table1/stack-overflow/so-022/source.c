#include <stddef.h>
#include <string.h>

int store_21(const char *data, size_t len) {
    char path[32];
    memcpy(path, data, len);
    return path[0];
}
