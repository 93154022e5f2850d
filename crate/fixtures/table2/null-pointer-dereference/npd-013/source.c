#include <string.h>

size_t length_12(const char *label) {
    size_t len = strlen(label);
    return len;
}
