#include <stddef.h>
#include <string.h>

int store_14(const char *data, size_t len) {
    char field[24];
    memcpy(field, data, len);
    return field[0];
}
