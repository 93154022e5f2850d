#include <string.h>

size_t length_14(const char *msg) {
    size_t len = strlen(msg);
    return len;
}
