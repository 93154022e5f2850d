#include <string.h>

size_t length_15(const char *key) {
    size_t len = strlen(key);
    return len;
}
