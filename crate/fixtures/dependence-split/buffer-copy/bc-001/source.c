#include <stdio.h>
#include <string.h>

void copy_0(const char *src) {
    char dest[8];
    strcpy(dest, src);
    puts(dest);
}
