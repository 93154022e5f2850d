#include <stdio.h>
#include <string.h>

void copy_2(const char *src) {
    char out[24];
    strcpy(out, src);
    puts(out);
}
