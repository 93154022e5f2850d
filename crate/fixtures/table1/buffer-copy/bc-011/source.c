#include <stdio.h>
#include <string.h>

void copy_10(const char *src) {
    char out[40];
    strcpy(out, src);
    puts(out);
}
