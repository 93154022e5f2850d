#include <stddef.h>
#include <string.h>

int store_25(const char *data, size_t len) {
    char buf[16];
    memcpy(buf, data, len);
    return buf[0];
}
