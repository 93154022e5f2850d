#include <string.h>

size_t length_20(const char *label) {
    size_t len = strlen(label);
    return len;
}
