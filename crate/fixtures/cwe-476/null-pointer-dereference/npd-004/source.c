#include <string.h>

size_t length_3(const char *key) {
    size_t len = strlen(key);
    return len;
}
