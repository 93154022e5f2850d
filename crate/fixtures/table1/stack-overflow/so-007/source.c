#include <stddef.h>
#include <string.h>

int store_6(const char *data, size_t len) {
    char field[8];
    memcpy(field, data, len);
    return field[0];
}
