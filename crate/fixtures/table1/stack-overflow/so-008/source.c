#include <stddef.h>
#include <string.h>

int store_7(const char *data, size_t len) {
    char tmp[16];
    memcpy(tmp, data, len);
    return tmp[0];
}
