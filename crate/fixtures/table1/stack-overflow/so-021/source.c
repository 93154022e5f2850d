#include <stddef.h>
#include <string.h>

int store_20(const char *data, size_t len) {
    char name[24];
    memcpy(name, data, len);
    return name[0];
}
