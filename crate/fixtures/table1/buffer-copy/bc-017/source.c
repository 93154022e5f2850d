#include <stdio.h>
#include <string.h>

void copy_16(const char *src) {
    char dest[40];
    strcpy(dest, src);
    puts(dest);
}
