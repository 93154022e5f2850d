#include <stddef.h>
#include <string.h>

int store_11(const char *data, size_t len) {
    char line[48];
    memcpy(line, data, len);
    return line[0];
}
