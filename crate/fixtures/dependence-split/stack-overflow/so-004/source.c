#include <stddef.h>
#include <string.h>

int store_3(const char *data, size_t len) {
    char line[32];
    memcpy(line, data, len);
    return line[0];
}
