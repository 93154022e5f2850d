#include <stddef.h>
#include <string.h>

int store_12(const char *data, size_t len) {
    char name[8];
    memcpy(name, data, len);
    return name[0];
}
