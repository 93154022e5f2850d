#include <string.h>

size_t length_18(const char *msg) {
    size_t len = strlen(msg);
    return len;
}
