#include <stddef.h>
#include <string.h>

int store_4(const char *data, size_t len) {
    char name[40];
    memcpy(name, data, len);
    return name[0];
}
