#include <stdio.h>
#include <string.h>

void copy_13(const char *src) {
    char path[16];
    strcpy(path, src);
    puts(path);
}
