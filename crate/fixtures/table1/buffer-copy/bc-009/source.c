#include <stdio.h>
#include <string.h>

void copy_8(const char *src) {
    char dest[24];
    strcpy(dest, src);
    puts(dest);
}
