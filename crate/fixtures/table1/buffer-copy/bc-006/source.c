#include <stdio.h>
#include <string.h>

void copy_5(const char *src) {
    char path[48];
    strcpy(path, src);
    puts(path);
}
