#include <stddef.h>
#include <string.h>

int store_17(const char *data, size_t len) {
    char buf[48];
    memcpy(buf, data, len);
    return buf[0];
}
