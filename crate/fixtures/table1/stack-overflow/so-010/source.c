#include <stddef.h>
#include <string.h>

int store_9(const char *data, size_t len) {
    char buf[32];
    memcpy(buf, data, len);
    return buf[0];
}
