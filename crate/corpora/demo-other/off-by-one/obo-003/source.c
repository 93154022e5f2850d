#include <string.h>

void pad(char *out, const char *in) {
    char line[16];
    size_t n = strlen(in);
    if (n > sizeof(line)) {
        return;
    }
    memcpy(line, in, n);
    line[n] = '\0';
    strcpy(out, line);
}
