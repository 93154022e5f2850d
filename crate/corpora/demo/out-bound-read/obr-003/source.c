#include <string.h>

void copy_header(char *dst, size_t n) {
    char header[16] = "HDR:";
    memcpy(dst, header, n);
}
