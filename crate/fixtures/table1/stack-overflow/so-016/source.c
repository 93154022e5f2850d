#include <stddef.h>
#include <string.h>

int store_15(const char *data, size_t len) {
    char tmp[32];
    memcpy(tmp, data, len);
    return tmp[0];
}
