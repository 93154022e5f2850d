#include <stddef.h>
#include <string.h>

int store_22(const char *data, size_t len) {
    char field[40];
    memcpy(field, data, len);
    return field[0];
}
