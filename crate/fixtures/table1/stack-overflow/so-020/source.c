#include <stddef.h>
#include <string.h>

int store_19(const char *data, size_t len) {
    char line[16];
    memcpy(line, data, len);
    return line[0];
}
