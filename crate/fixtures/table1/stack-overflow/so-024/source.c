#include <stddef.h>
#include <string.h>

int store_23(const char *data, size_t len) {
    char tmp[48];
    memcpy(tmp, data, len);
    return tmp[0];
}
