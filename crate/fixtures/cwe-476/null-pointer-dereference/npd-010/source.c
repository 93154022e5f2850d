#include <string.h>

size_t length_9(const char *text) {
    size_t len = strlen(text);
    return len;
}
