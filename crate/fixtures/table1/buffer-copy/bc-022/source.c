#include <stdio.h>
#include <string.h>

void copy_21(const char *src) {
    char path[32];
    strcpy(path, src);
    puts(path);
}
