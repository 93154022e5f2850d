#include <string.h>

size_t length_19(const char *key) {
    size_t len = strlen(key);
    return len;
}
