#include <stdio.h>
#include <string.h>

void copy_18(const char *src) {
    char out[8];
    strcpy(out, src);
    puts(out);
}
